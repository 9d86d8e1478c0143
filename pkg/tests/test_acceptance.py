"""The acceptance gate: every verification criterion at its stated tolerance.

Each test prints one pass/fail line (visible with `pytest -s` or on failure)
and asserts the criterion outcome.  Runtimes are dominated by the character
identity and the full-size Haar certification.
"""

import pytest

from so21 import acceptance

CRITERIA = [
    acceptance.criterion_1_covering_homomorphism,
    acceptance.criterion_2_decompositions,
    acceptance.criterion_3_lie_layer,
    acceptance.criterion_4_spherical_eigenvalue,
    acceptance.criterion_5_unitarity,
    acceptance.criterion_6_matcoef_vs_spherical,
    acceptance.criterion_7_ladders,
    acceptance.criterion_8_projectors,
    acceptance.criterion_9_gram,
    acceptance.criterion_10_character_identity,
    acceptance.criterion_11_haar,
]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda fn: fn.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.detail
