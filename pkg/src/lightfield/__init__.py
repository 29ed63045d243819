from .lightfield import (LightFieldGrid,
                         SampledLightField,
                         FlatImage,
                         RayMatrix,
                         Aperture,
                         LightFieldChain,
                         build_pixel_lightfield,
                         transport,
                         apply_aperture,
                         integrate_to_image)
from .oracle import OracleResult, eye_chain, oracle_retinal_psf, oracle_sweep, half_max_width

__all__ = [
    'LightFieldGrid',
    'SampledLightField',
    'FlatImage',
    'RayMatrix',
    'Aperture',
    'LightFieldChain',
    'build_pixel_lightfield',
    'transport',
    'apply_aperture',
    'integrate_to_image',
    'OracleResult',
    'eye_chain',
    'oracle_retinal_psf',
    'oracle_sweep',
    'half_max_width',
]
