# cython: boundscheck=False, wraparound=False, cdivision=True
"""Fused elementwise kernels for the solver inner loops.

Single-pass versions of the stage updates and spectral assembly used per
RK4/IFRK4 step; avoids the temporaries the numpy lane allocates per
operator. FFTs stay in numpy either way.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "cython"

ctypedef double complex cdbl


def axpy(cnp.ndarray x, double a, cnp.ndarray y):
    cdef cdbl[::1] xv = x.ravel()
    cdef cdbl[::1] yv = y.ravel()
    out = np.empty_like(x)
    cdef cdbl[::1] ov = out.ravel()
    cdef Py_ssize_t i, n = xv.shape[0]
    for i in range(n):
        ov[i] = xv[i] + a * yv[i]
    return out


def rk4_combine(cnp.ndarray w, cnp.ndarray k1, cnp.ndarray k2,
                cnp.ndarray k3, cnp.ndarray k4, double dt):
    cdef cdbl[::1] wv = w.ravel()
    cdef cdbl[::1] a = k1.ravel(), b = k2.ravel(), c = k3.ravel(), d = k4.ravel()
    out = np.empty_like(w)
    cdef cdbl[::1] ov = out.ravel()
    cdef double f = dt / 6.0
    cdef Py_ssize_t i, n = wv.shape[0]
    for i in range(n):
        ov[i] = wv[i] + f * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i])
    return out


def combine2(cnp.ndarray a, cnp.ndarray sa, cnp.ndarray b, cnp.ndarray sb):
    cdef cdbl[::1] av = a.ravel(), sav = sa.ravel()
    cdef cdbl[::1] bv = b.ravel(), sbv = sb.ravel()
    out = np.empty_like(a)
    cdef cdbl[::1] ov = out.ravel()
    cdef Py_ssize_t i, n = av.shape[0]
    for i in range(n):
        ov[i] = av[i] * sav[i] + bv[i] * sbv[i]
    return out


def combine2s(cnp.ndarray a, cnp.ndarray sa, cnp.ndarray b, double beta):
    cdef cdbl[::1] av = a.ravel(), sav = sa.ravel()
    cdef cdbl[::1] bv = b.ravel()
    out = np.empty_like(a)
    cdef cdbl[::1] ov = out.ravel()
    cdef Py_ssize_t i, n = av.shape[0]
    for i in range(n):
        ov[i] = av[i] * sav[i] + beta * bv[i]
    return out


def combine3(cnp.ndarray a, cnp.ndarray sa, cnp.ndarray b, cnp.ndarray sb,
             cnp.ndarray c, cnp.ndarray sc):
    cdef cdbl[::1] av = a.ravel(), sav = sa.ravel()
    cdef cdbl[::1] bv = b.ravel(), sbv = sb.ravel()
    cdef cdbl[::1] cv = c.ravel(), scv = sc.ravel()
    out = np.empty_like(a)
    cdef cdbl[::1] ov = out.ravel()
    cdef Py_ssize_t i, n = av.shape[0]
    for i in range(n):
        ov[i] = av[i] * sav[i] + bv[i] * sbv[i] + cv[i] * scv[i]
    return out


def ifrk4_combine(cnp.ndarray w, cnp.ndarray e2, cnp.ndarray e,
                  cnp.ndarray n1, cnp.ndarray n2, cnp.ndarray n3,
                  cnp.ndarray n4, double dt):
    cdef cdbl[::1] wv = w.ravel(), e2v = e2.ravel(), ev = e.ravel()
    cdef cdbl[::1] a = n1.ravel(), b = n2.ravel(), c = n3.ravel(), d = n4.ravel()
    out = np.empty_like(w)
    cdef cdbl[::1] ov = out.ravel()
    cdef double f = dt / 6.0
    cdef Py_ssize_t i, n = wv.shape[0]
    for i in range(n):
        ov[i] = e2v[i] * wv[i] + f * (e2v[i] * a[i] + 2.0 * ev[i] * (b[i] + c[i]) + d[i])
    return out


def quad_products(cnp.ndarray w, cnp.ndarray wx, cnp.ndarray wxx):
    cdef double[::1] wv = w.ravel(), wxv = wx.ravel(), wxxv = wxx.ravel()
    sq = np.empty_like(w)
    flux = np.empty_like(w)
    cdef double[::1] sv = sq.ravel(), fv = flux.ravel()
    cdef Py_ssize_t i, n = wv.shape[0]
    for i in range(n):
        sv[i] = wv[i] * wv[i]
        fv[i] = 0.5 * wxv[i] * wxv[i] + wv[i] * wxxv[i]
    return sq, flux
