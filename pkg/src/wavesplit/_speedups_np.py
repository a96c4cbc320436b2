"""Pure-numpy kernel lane.

Same call surface as the compiled ``_speedups`` extension; selected by
``wavesplit.backend`` when the extension is unavailable or forced off.
"""

NAME = "numpy"


def axpy(x, a, y):
    return x + a * y


def rk4_combine(w, k1, k2, k3, k4, dt):
    return w + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def combine2(a, sa, b, sb):
    return a * sa + b * sb


def combine2s(a, sa, b, beta):
    return a * sa + beta * b


def combine3(a, sa, b, sb, c, sc):
    return a * sa + b * sb + c * sc


def ifrk4_combine(w, e2, e, n1, n2, n3, n4, dt):
    return e2 * w + (dt / 6.0) * (e2 * n1 + 2.0 * e * (n2 + n3) + n4)


def quad_products(w, wx, wxx):
    return w * w, 0.5 * wx * wx + w * wxx
