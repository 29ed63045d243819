from .blur import BlurEstimate, estimate_blur_diameter
from .mtf import MtfCurve, line_spread, mtf_from_slit
from .fitting import LinearFit, linear_fit
from .experiments import (measure_spots,
                          fit_reliable_spots,
                          blur_linearity_experiment,
                          worst_case_focus,
                          inter_plane_mtf_experiment)

__all__ = [
    'BlurEstimate',
    'estimate_blur_diameter',
    'MtfCurve',
    'line_spread',
    'mtf_from_slit',
    'LinearFit',
    'linear_fit',
    'measure_spots',
    'fit_reliable_spots',
    'blur_linearity_experiment',
    'worst_case_focus',
    'inter_plane_mtf_experiment',
]
