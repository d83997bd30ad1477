# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: per-region histogram accumulation and chi-square scans.

Binning expressions mirror numpy_backend operation for operation so raw
counts agree bit for bit between backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


def region_histograms(double[::1] h, double[::1] s, double[::1] v,
                      unsigned char[::1] labels,
                      Py_ssize_t hue_bins, Py_ssize_t sat_bins, Py_ssize_t val_bins,
                      Py_ssize_t n_regions=5):
    """Raw per-region bin counts, shape (n_regions, hue*sat*val), int64."""
    cdef Py_ssize_t n = h.shape[0]
    if s.shape[0] != n or v.shape[0] != n or labels.shape[0] != n:
        raise ValueError("channel and label arrays must share one length")
    cdef Py_ssize_t bins_per_region = hue_bins * sat_bins * val_bins
    out = np.zeros(n_regions * bins_per_region, dtype=np.int64)
    cdef long long[::1] counts = out
    cdef Py_ssize_t i, hi, si, vi
    cdef double hb = <double>hue_bins
    cdef double sb = <double>sat_bins
    cdef double vb = <double>val_bins
    with nogil:
        for i in range(n):
            hi = <Py_ssize_t>floor(h[i] / 360.0 * hb)
            si = <Py_ssize_t>floor(s[i] * sb)
            vi = <Py_ssize_t>floor(v[i] * vb)
            if hi < 0:
                hi = 0
            elif hi > hue_bins - 1:
                hi = hue_bins - 1
            if si < 0:
                si = 0
            elif si > sat_bins - 1:
                si = sat_bins - 1
            if vi < 0:
                vi = 0
            elif vi > val_bins - 1:
                vi = val_bins - 1
            counts[(<Py_ssize_t>labels[i]) * bins_per_region
                   + (hi * sat_bins + si) * val_bins + vi] += 1
    return out.reshape(n_regions, bins_per_region)


def chi_square_batch(double[::1] query, double[:, ::1] matrix):
    """0.5 * sum((x-y)^2 / (x+y)) per matrix row; 0/0 terms contribute 0."""
    cdef Py_ssize_t rows = matrix.shape[0]
    cdef Py_ssize_t dim = matrix.shape[1]
    if query.shape[0] != dim:
        raise ValueError("query length must equal matrix row length")
    out = np.empty(rows, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t i, j
    cdef double acc, diff, denom
    with nogil:
        for i in range(rows):
            acc = 0.0
            for j in range(dim):
                denom = matrix[i, j] + query[j]
                if denom > 0.0:
                    diff = matrix[i, j] - query[j]
                    acc += diff * diff / denom
            res[i] = 0.5 * acc
    return out
