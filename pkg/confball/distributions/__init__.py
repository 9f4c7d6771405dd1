from confball.distributions.chi2 import (
    NEG_INF,
    NoncentralChi2,
    central_chi2_cdf,
    chi2_quantile,
    chi2_sf,
    noncentral_chi2_cdf,
    sample_noncentral,
)
from confball.distributions.envelopes import birge_lower, birge_upper
