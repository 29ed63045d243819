from .base_filter import BaseFilter
from .direct_filter import DirectFilter, assign_direct, nearest_plane_index
from .linear_filter import LinearFilter, assign_linear, linear_weights
from .operator import StackBlurOperator
from .optimized_filter import (OptimizedFilter, OptimizationResult, optimize_stack, stack_objective,
                               estimate_lipschitz)

__all__ = [
    'BaseFilter',
    'DirectFilter',
    'assign_direct',
    'nearest_plane_index',
    'LinearFilter',
    'assign_linear',
    'linear_weights',
    'StackBlurOperator',
    'OptimizedFilter',
    'OptimizationResult',
    'optimize_stack',
    'stack_objective',
    'estimate_lipschitz',
]
