import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.optics import DisplayModel, EyeModel, PlaneLayout
from src.renderer import FocalStack, Scene, render_ground_truth
from src.utils.exceptions import NumericalFailureError
from src.utils.settings import OptimizeSettings
from .base_filter import BaseFilter
from .direct_filter import assign_direct
from .operator import StackBlurOperator

logger = logging.getLogger(__name__)


@dataclass
class OptimizationResult:
    stack: FocalStack
    objectives: List[float] = field(default_factory=list)
    step_sizes: List[float] = field(default_factory=list)


def estimate_lipschitz(operator: StackBlurOperator, power_iterations: int, seed: int = 0) -> float:
    """Largest eigenvalue of 2 A^T A by power iteration."""
    rng = np.random.default_rng(seed)
    v = rng.random((operator.layout.count,) + operator.shape)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(power_iterations):
        w = 2.0 * operator.normal(v)
        estimate = float(np.linalg.norm(w))
        if estimate == 0.0:
            break
        v = w / estimate
    return estimate


def _objective(residual: np.ndarray) -> float:
    return float(np.sum(residual * residual))


def _project(x: np.ndarray, clamp_upper: bool) -> np.ndarray:
    x = np.maximum(x, 0.0)
    return np.minimum(x, 1.0) if clamp_upper else x


def _optimize_channel(operator: StackBlurOperator, targets: np.ndarray, x: np.ndarray,
                      opts: OptimizeSettings, seed: int):
    lipschitz = estimate_lipschitz(operator, opts.power_iterations, seed)
    t0 = 1.0 / lipschitz if lipschitz > 0 else 1.0
    residual = operator.forward(x) - targets
    objective = _objective(residual)
    if not np.isfinite(objective):
        raise NumericalFailureError(0, "initial objective is not finite")
    objectives, steps = [objective], []

    for iteration in range(1, opts.iterations + 1):
        gradient = 2.0 * operator.adjoint(residual)
        t = t0
        accepted = False
        for _ in range(opts.max_backtracks):
            candidate = _project(x - t * gradient, opts.clamp_upper)
            delta = candidate - x
            cand_residual = operator.forward(candidate) - targets
            cand_objective = _objective(cand_residual)
            if not np.isfinite(cand_objective):
                raise NumericalFailureError(iteration, "objective became non-finite")
            bound = objective + float(np.sum(gradient * delta)) + float(np.sum(delta * delta)) / (2.0 * t)
            if cand_objective <= bound and cand_objective <= objective:
                accepted = True
                break
            t *= 0.5
        if accepted:
            x, residual, objective = candidate, cand_residual, cand_objective
            steps.append(t)
        else:
            steps.append(0.0)
        objectives.append(objective)
        if iteration % 100 == 0:
            logger.info("iteration %d: objective %.6e", iteration, objective)
    return x, objectives, steps


def optimize_stack(scene: Scene, layout: PlaneLayout, focus_samples: Sequence[float], eye: EyeModel,
                   display: DisplayModel, iterations: Optional[int] = None, initial: Optional[FocalStack] = None,
                   opts: Optional[OptimizeSettings] = None, seed: int = 0) -> OptimizationResult:
    """
    Non-negative least squares on the retinal images: minimizes the sum over focus samples of
    ||render_from_stack(stack) - render_ground_truth(scene)||^2 by projected gradient descent with a
    backtracking step that starts at 1/L each iteration. Color scenes are solved per channel and
    the objectives of all channels are summed.
    """
    opts = opts or OptimizeSettings()
    if iterations is not None:
        opts = opts.model_copy(update={"iterations": iterations})
    if not focus_samples:
        raise ValueError("optimize_stack needs at least one focus sample")
    initial = initial or assign_direct(scene, layout)
    if initial.shape != scene.image.shape or initial.layout != layout:
        raise ValueError("initial stack does not match the scene and layout")

    operator = StackBlurOperator(scene.shape, layout, focus_samples, eye, display)
    truths = np.stack([render_ground_truth(scene, eye.focused_at(f), display) for f in focus_samples])
    initial_array = initial.as_array()

    channels, objectives, steps = [], None, []
    for c in range(scene.channels):
        if scene.image.ndim == 2:
            targets, x0 = truths, initial_array
        else:
            targets, x0 = truths[..., c], initial_array[..., c]
        x, channel_objectives, channel_steps = _optimize_channel(operator, targets, x0, opts, seed)
        channels.append(x)
        objectives = channel_objectives if objectives is None else list(np.add(objectives, channel_objectives))
        steps = channel_steps
    result = channels[0] if scene.image.ndim == 2 else np.stack(channels, axis=-1)
    logger.info("optimized %d planes over %d focus samples: objective %.6e -> %.6e",
                layout.count, len(focus_samples), objectives[0], objectives[-1])
    return OptimizationResult(FocalStack.from_array(layout, result), [float(o) for o in objectives], steps)


def stack_objective(stack: FocalStack, scene: Scene, focus_samples: Sequence[float], eye: EyeModel,
                    display: DisplayModel) -> float:
    """The optimization objective evaluated for any stack, e.g. a direct or linear baseline."""
    operator = StackBlurOperator(scene.shape, stack.layout, focus_samples, eye, display)
    truths = np.stack([render_ground_truth(scene, eye.focused_at(f), display) for f in focus_samples])
    values = stack.as_array()
    if scene.image.ndim == 2:
        return _objective(operator.forward(values) - truths)
    return sum(_objective(operator.forward(values[..., c]) - truths[..., c]) for c in range(scene.channels))


class OptimizedFilter(BaseFilter):
    def __init__(self, eye: EyeModel, display: DisplayModel, focus_samples: Sequence[float],
                 opts: Optional[OptimizeSettings] = None, seed: int = 0):
        self.eye = eye
        self.display = display
        self.focus_samples = list(focus_samples)
        self.opts = opts or OptimizeSettings()
        self.seed = seed
        self.objectives: List[float] = []

    def __call__(self, scene: Scene, layout: PlaneLayout) -> FocalStack:
        result = optimize_stack(scene, layout, self.focus_samples, self.eye, self.display,
                                opts=self.opts, seed=self.seed)
        self.objectives = result.objectives
        return result.stack
