import numpy as np
import pytest

from src.filters import (assign_direct, assign_linear, linear_weights, optimize_stack, stack_objective,
                         DirectFilter, LinearFilter, StackBlurOperator)
from src.optics import DisplayModel, EyeModel, PlaneLayout
from src.renderer import Scene, FocalStack, render_from_stack
from src.utils import FilterMethod, import_filter_class
from src.utils.settings import OptimizeSettings

display = DisplayModel(pixel_pitch_m=13.6e-6, display_distance_m=0.07)
eye = EyeModel(pupil_diameter_m=0.004)
focus_samples = list(np.linspace(0.0, 2.0, 81))


def two_depth_scene(size: int = 64) -> Scene:
    rng = np.random.default_rng(7)
    image = rng.random((size, size))
    depth = np.full((size, size), 0.4)
    depth[:, : size // 2] = 1.7
    return Scene(image, depth)


def test_direct_assignment_rules():
    layout = PlaneLayout.uniform(2.0, 0.0, 3)
    depth = np.array([[2.0, 1.0, 0.5], [0.0, 1.5, 3.0]])
    scene = Scene(np.full((2, 3), 0.5), depth)
    stack = assign_direct(scene, layout)
    assert stack.planes[0].tolist() == [[0.5, 0.0, 0.0], [0.0, 0.5, 0.5]]
    assert stack.planes[1].tolist() == [[0.0, 0.5, 0.5], [0.0, 0.0, 0.0]]
    assert stack.planes[2].tolist() == [[0.0, 0.0, 0.0], [0.5, 0.0, 0.0]]

    single = assign_direct(scene, PlaneLayout(depths_diopter=(1.0,)))
    assert np.array_equal(single.planes[0], scene.image)


def test_linear_weights():
    layout = PlaneLayout.uniform(1.0, 0.0, 2)
    near, weight = linear_weights(np.array([1.0, 0.5, 0.0, -0.0, 1.5, 0.25]), layout)
    assert near.tolist() == [0, 0, 0, 0, 0, 0]
    assert weight.tolist() == [1.0, 0.5, 0.0, 0.0, 1.0, 0.25]

    three = PlaneLayout.uniform(2.0, 0.0, 3)
    depths = np.linspace(0.0, 2.0, 2001)
    near, weight = linear_weights(depths, three)
    effective = np.where(near == 0, 1.0 + weight, weight)
    assert np.max(np.abs(np.diff(effective))) < 2e-3


def test_linear_assignment_clamps_and_splits():
    layout = PlaneLayout.uniform(2.0, 1.0, 2)
    scene = Scene(np.full((1, 3), 0.8), np.array([[1.5, 0.2, 2.0]]))
    stack = assign_linear(scene, layout)
    assert stack.planes[0].tolist() == [[0.4, 0.0, 0.8]]
    assert stack.planes[1].tolist() == [[0.4, 0.8, 0.0]]


@pytest.mark.parametrize("assign", [assign_direct, assign_linear])
def test_partition_of_unity_is_exact(assign):
    rng = np.random.default_rng(11)
    layout = PlaneLayout.uniform(4.0, 0.0, 7)
    scene = Scene(rng.random((33, 21, 3)), rng.uniform(0.0, 5.0, size=(33, 21)))
    stack = assign(scene, layout)
    assert np.array_equal(stack.total(), scene.image)
    assert all(np.all(p >= 0) for p in stack.planes)


def test_filter_classes_load_by_method():
    assert import_filter_class(FilterMethod.DIRECT.class_path()) is DirectFilter
    assert import_filter_class(FilterMethod.from_string("linear").class_path()) is LinearFilter
    with pytest.raises(ValueError):
        FilterMethod.from_string("median")


def test_operator_matches_renderer_and_is_self_adjoint():
    layout = PlaneLayout.uniform(2.0, 0.0, 3)
    rng = np.random.default_rng(5)
    x = rng.random((3, 64, 64))
    focuses = [0.3, 0.7, 2.0]
    # focus 2.0 on the 0 D plane blurs ~41 px, so the image must be wider than that
    op = StackBlurOperator((64, 64), layout, focuses, eye, display)
    images = op.forward(x)
    stack = FocalStack.from_array(layout, x)
    for k, f in enumerate(focuses):
        assert np.allclose(images[k], render_from_stack(stack, eye.focused_at(f), display), atol=1e-10)
    y = rng.random((3, 64, 64))
    assert np.sum(op.forward(x) * y) == pytest.approx(np.sum(x * op.adjoint(y)), rel=1e-10)


def test_single_plane_scene_is_fixed_point():
    layout = PlaneLayout(depths_diopter=(1.0,))
    rng = np.random.default_rng(6)
    scene = Scene(rng.random((32, 32)), np.full((32, 32), 1.0))
    initial = assign_direct(scene, layout)
    result = optimize_stack(scene, layout, [0.0, 0.5, 1.0, 1.5, 2.0], eye, display, iterations=5, initial=initial)
    assert result.objectives[0] == pytest.approx(0.0, abs=1e-18)
    assert np.max(np.abs(result.stack.planes[0] - initial.planes[0])) <= 1e-9


def test_optimization_is_monotone_and_clamps():
    layout = PlaneLayout.uniform(2.0, 0.0, 3)
    scene = two_depth_scene(32)
    opts = OptimizeSettings(iterations=30, clamp_upper=True)
    result = optimize_stack(scene, layout, [0.0, 1.0, 2.0], EyeModel(pupil_diameter_m=0.002), display, opts=opts)
    assert len(result.objectives) == 31
    assert all(b <= a for a, b in zip(result.objectives, result.objectives[1:]))
    assert all(np.all((p >= 0) & (p <= 1)) for p in result.stack.planes)


@pytest.mark.slow
def test_optimization_beats_baselines_on_two_depth_scene():
    layout = PlaneLayout.uniform(2.0, 0.0, 4)
    scene = two_depth_scene()
    result = optimize_stack(scene, layout, focus_samples, eye, display, iterations=500)
    objectives = result.objectives
    assert len(objectives) == 501
    assert all(b <= a for a, b in zip(objectives, objectives[1:]))
    direct = stack_objective(assign_direct(scene, layout), scene, focus_samples, eye, display)
    linear = stack_objective(assign_linear(scene, layout), scene, focus_samples, eye, display)
    assert objectives[0] == pytest.approx(direct, rel=1e-9)
    assert objectives[-1] <= direct
    assert objectives[-1] <= linear
