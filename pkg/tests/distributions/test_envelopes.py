import math

import numpy as np
import pytest

import confball


def test_envelope_formulas():
    z, d, u = 10.0, 5, 0.05
    L = math.log(1 / u)
    np.testing.assert_allclose(
        confball.distributions.birge_upper(z, d, u),
        z + d + 2 * math.sqrt((2 * z + d) * L) + 2 * L,
    )
    np.testing.assert_allclose(
        confball.distributions.birge_lower(z, d, u),
        z + d - 2 * math.sqrt((2 * z + d) * L),
    )


def test_envelopes_order():
    for z in [0.0, 5.0, 500.0]:
        for d in [1, 30]:
            for u in [0.01, 0.3]:
                assert confball.distributions.birge_lower(z, d, u) \
                    < confball.distributions.birge_upper(z, d, u)


def test_envelope_domain():
    with pytest.raises(confball.errors.DomainError):
        confball.distributions.birge_upper(-1.0, 2, 0.1)
    with pytest.raises(confball.errors.DomainError):
        confball.distributions.birge_upper(1.0, 0, 0.1)
    with pytest.raises(confball.errors.DomainError):
        confball.distributions.birge_lower(1.0, 2, 1.0)
