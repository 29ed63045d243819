from .stack import Scene, FocalStack
from .kernels import blur_diameter_px, disc_kernel, disc_blur
from .retina import render_from_stack, render_ground_truth
from .scenes import spot_centers, psf_grid_scene, slit_scene

__all__ = [
    'Scene',
    'FocalStack',
    'blur_diameter_px',
    'disc_kernel',
    'disc_blur',
    'render_from_stack',
    'render_ground_truth',
    'spot_centers',
    'psf_grid_scene',
    'slit_scene',
]
