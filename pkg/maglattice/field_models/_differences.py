"""Central finite-difference stencils over a vectorised scalar field.

``func`` takes an (N, 3) array of points and returns N values; every stencil
is evaluated in a single call so that models pay their per-call overhead once.
"""
import numpy as np


def central_gradient(func, point, step):
    point = np.asarray(point, dtype=float)
    offsets = np.eye(3) * step
    values = func(np.concatenate([point + offsets, point - offsets]))
    return (values[:3] - values[3:]) / (2.0 * step)


_PAIRS = ((0, 1), (0, 2), (1, 2))


def central_hessian(func, point, step):
    point = np.asarray(point, dtype=float)
    unit = np.eye(3) * step
    stencil = [point]
    stencil.extend(point + unit[i] for i in range(3))
    stencil.extend(point - unit[i] for i in range(3))
    for i, j in _PAIRS:
        stencil.extend([point + unit[i] + unit[j], point + unit[i] - unit[j],
                        point - unit[i] + unit[j], point - unit[i] - unit[j]])
    values = func(np.array(stencil))

    center = values[0]
    hessian = np.empty((3, 3))
    for i in range(3):
        hessian[i, i] = (values[1 + i] - 2.0 * center + values[4 + i]) / step ** 2
    for k, (i, j) in enumerate(_PAIRS):
        pp, pm, mp, mm = values[7 + 4 * k: 11 + 4 * k]
        hessian[i, j] = hessian[j, i] = (pp - pm - mp + mm) / (4.0 * step ** 2)
    return 0.5 * (hessian + hessian.T)
