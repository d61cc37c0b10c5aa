"""Composite Simpson quadrature on rectangles.

Used as the production route for the kinetic-energy surface integral and as
the independent cross-check for every closed-form coupling integral in the
package.  The 2-D rule is the tensor product of two 1-D composite Simpson
rules; ``integrate_2d`` doubles the panel count until two successive
refinements agree to the requested relative tolerance.
"""

import numpy as np


def _simpson_weights(panels: int, h: float) -> np.ndarray:
    # panels must be even; composite weights (1,4,2,...,2,4,1) * h/3
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def simpson_1d(f, a: float, b: float, panels: int) -> float:
    """Composite Simpson approximation of the 1-D integral of ``f`` on [a, b].

    ``f`` must accept a numpy array of sample points.  ``panels`` must be even.
    """
    if panels % 2:
        raise ValueError("panel count must be even")
    x = np.linspace(a, b, panels + 1)
    return float(_simpson_weights(panels, (b - a) / panels) @ np.asarray(f(x), dtype=float))

def simpson_2d(f, rect, panels) -> float:
    """Tensor-product composite Simpson rule over a rectangle.

    Parameters
    ----------
    f : callable
        Vectorized integrand ``f(X1, X2)`` evaluated on meshgrid arrays.
    rect : ((a1, b1), (a2, b2))
        Integration rectangle.
    panels : int or (int, int)
        Even panel count per axis.
    """
    (a1, b1), (a2, b2) = rect
    n1, n2 = (panels, panels) if np.isscalar(panels) else panels
    if n1 % 2 or n2 % 2:
        raise ValueError("panel counts must be even")
    x1 = np.linspace(a1, b1, n1 + 1)
    x2 = np.linspace(a2, b2, n2 + 1)
    w1 = _simpson_weights(n1, (b1 - a1) / n1)
    w2 = _simpson_weights(n2, (b2 - a2) / n2)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    values = np.asarray(f(X1, X2), dtype=float)
    return float(w1 @ values @ w2)


def integrate_2d(f, rect, rtol: float = 1e-12, start_panels: int = 8,
                 max_panels: int = 8192) -> float:
    """Panel-doubling composite Simpson integration over a rectangle.

    Doubles the (common) panel count until two successive approximations
    differ by less than ``rtol`` relative to the current value, with an
    absolute floor of ``rtol`` for integrals near zero.
    """
    panels = start_panels
    previous = simpson_2d(f, rect, panels)
    while panels < max_panels:
        panels *= 2
        current = simpson_2d(f, rect, panels)
        if abs(current - previous) <= rtol * max(abs(current), 1.0):
            return current
        previous = current
    raise RuntimeError(
        f"Simpson refinement did not converge to rtol={rtol} within {max_panels} panels"
    )


def integrate_1d(f, a: float, b: float, rtol: float = 1e-12,
                 start_panels: int = 8, max_panels: int = 1 << 20) -> float:
    """Panel-doubling composite Simpson integration on an interval."""
    panels = start_panels
    previous = simpson_1d(f, a, b, panels)
    while panels < max_panels:
        panels *= 2
        current = simpson_1d(f, a, b, panels)
        if abs(current - previous) <= rtol * max(abs(current), 1.0):
            return current
        previous = current
    raise RuntimeError(
        f"Simpson refinement did not converge to rtol={rtol} within {max_panels} panels"
    )
