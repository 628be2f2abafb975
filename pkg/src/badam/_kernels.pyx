# Compiled pixel kernels. Mirrors badam._kernels_py function by function;
# both backends must produce identical output (asserted by the test suite),
# so any change here needs the same change there.

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def gaussian_separable(cnp.ndarray[cnp.float64_t, ndim=2] values,
                       cnp.ndarray[cnp.float64_t, ndim=1] weights):
    cdef Py_ssize_t h = values.shape[0]
    cdef Py_ssize_t w = values.shape[1]
    cdef Py_ssize_t taps = weights.shape[0]
    cdef Py_ssize_t radius = taps // 2
    cdef cnp.ndarray[cnp.float64_t, ndim=2] padded = \
        np.pad(values, radius, mode="symmetric")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] tmp = \
        np.zeros((h + 2 * radius, w), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = \
        np.zeros((h, w), dtype=np.float64)
    cdef Py_ssize_t y, x, k
    cdef double acc
    for y in range(h + 2 * radius):
        for x in range(w):
            acc = 0.0
            for k in range(taps):
                acc += weights[k] * padded[y, x + k]
            tmp[y, x] = acc
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for k in range(taps):
                acc += weights[k] * tmp[y + k, x]
            out[y, x] = acc
    return out


def label_components(cnp.ndarray[cnp.uint8_t, ndim=2] mask):
    """Raster-scan BFS labeling; labels 1..count in first-pixel order."""
    cdef Py_ssize_t h = mask.shape[0]
    cdef Py_ssize_t w = mask.shape[1]
    cdef cnp.ndarray[cnp.int32_t, ndim=2] labels = \
        np.zeros((h, w), dtype=np.int32)
    if h == 0 or w == 0:
        return labels, 0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue = \
        np.empty(h * w, dtype=np.int64)
    cdef Py_ssize_t y, x, qh, qt, cy, cx, ny, nx, d
    cdef int count = 0
    cdef int[8] doy = [0, -1, -1, -1, 0, 1, 1, 1]
    cdef int[8] dox = [1, 1, 0, -1, -1, -1, 0, 1]
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0 or labels[y, x] != 0:
                continue
            count += 1
            qh = 0
            qt = 0
            queue[qt] = y * w + x
            qt += 1
            labels[y, x] = count
            while qh < qt:
                cy = queue[qh] // w
                cx = queue[qh] % w
                qh += 1
                for d in range(8):
                    ny = cy + doy[d]
                    nx = cx + dox[d]
                    if ny < 0 or ny >= h or nx < 0 or nx >= w:
                        continue
                    if mask[ny, nx] != 0 and labels[ny, nx] == 0:
                        labels[ny, nx] = count
                        queue[qt] = ny * w + nx
                        qt += 1
    return labels, count


def hysteresis(cnp.ndarray[cnp.float64_t, ndim=2] values,
               double t_low, double t_high):
    """Flood fill from >=t_high seeds through >=t_low pixels (8-connected)."""
    cdef Py_ssize_t h = values.shape[0]
    cdef Py_ssize_t w = values.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out = \
        np.zeros((h, w), dtype=np.uint8)
    if h == 0 or w == 0:
        return out.view(bool)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue = \
        np.empty(h * w, dtype=np.int64)
    cdef Py_ssize_t y, x, qh, qt, cy, cx, ny, nx, d
    cdef int[8] doy = [0, -1, -1, -1, 0, 1, 1, 1]
    cdef int[8] dox = [1, 1, 0, -1, -1, -1, 0, 1]
    qh = 0
    qt = 0
    for y in range(h):
        for x in range(w):
            if values[y, x] >= t_high:
                out[y, x] = 1
                queue[qt] = y * w + x
                qt += 1
    while qh < qt:
        cy = queue[qh] // w
        cx = queue[qh] % w
        qh += 1
        for d in range(8):
            ny = cy + doy[d]
            nx = cx + dox[d]
            if ny < 0 or ny >= h or nx < 0 or nx >= w:
                continue
            if out[ny, nx] == 0 and values[ny, nx] >= t_low:
                out[ny, nx] = 1
                queue[qt] = ny * w + nx
                qt += 1
    return out.view(bool)


def thin(cnp.ndarray[cnp.uint8_t, ndim=2] mask,
         cnp.ndarray[cnp.uint8_t, ndim=1] lut):
    """Directional sequential thinning, semantics identical to the pure
    backend: candidates per direction from the sub-pass start state,
    deletion re-checked against the live raster in raster order."""
    cdef Py_ssize_t h = mask.shape[0]
    cdef Py_ssize_t w = mask.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] work = \
        np.zeros((h + 2, w + 2), dtype=np.uint8)
    work[1:h + 1, 1:w + 1] = mask
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cand = \
        np.empty(h * w, dtype=np.int64)
    cdef int[8] boy = [0, -1, -1, -1, 0, 1, 1, 1]
    cdef int[8] box = [1, 1, 0, -1, -1, -1, 0, 1]
    cdef int[4] sdy = [-1, 1, 0, 0]
    cdef int[4] sdx = [0, 0, -1, 1]
    cdef Py_ssize_t y, x, i, ncand, bit
    cdef int d, bits, n
    cdef bint changed = True
    cdef Py_ssize_t pw = w + 2
    while changed:
        changed = False
        for d in range(4):
            ncand = 0
            for y in range(1, h + 1):
                for x in range(1, w + 1):
                    if work[y, x] == 1 and work[y + sdy[d], x + sdx[d]] == 0:
                        cand[ncand] = y * pw + x
                        ncand += 1
            for i in range(ncand):
                y = cand[i] // pw
                x = cand[i] % pw
                bits = 0
                n = 0
                for bit in range(8):
                    if work[y + boy[bit], x + box[bit]]:
                        bits |= 1 << bit
                        n += 1
                if n <= 1:
                    continue
                if lut[bits]:
                    work[y, x] = 0
                    changed = True
    return work[1:h + 1, 1:w + 1].astype(bool)


def sauvola(cnp.ndarray[cnp.uint8_t, ndim=2] img,
            int window, double k, double r_dynamic):
    """Sauvola threshold from exact int64 integral images; float expression
    kept verbatim against the pure backend for bit-identical masks."""
    cdef Py_ssize_t h = img.shape[0]
    cdef Py_ssize_t w = img.shape[1]
    cdef Py_ssize_t radius = window // 2
    cdef cnp.ndarray[cnp.int64_t, ndim=2] padded = \
        np.pad(img.astype(np.int64), radius, mode="symmetric")
    cdef Py_ssize_t ph = padded.shape[0]
    cdef Py_ssize_t pw = padded.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] ii1 = \
        np.zeros((ph + 1, pw + 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] ii2 = \
        np.zeros((ph + 1, pw + 1), dtype=np.int64)
    cdef Py_ssize_t y, x
    cdef cnp.int64_t v
    for y in range(ph):
        for x in range(pw):
            v = padded[y, x]
            ii1[y + 1, x + 1] = v + ii1[y, x + 1] + ii1[y + 1, x] - ii1[y, x]
            ii2[y + 1, x + 1] = v * v + ii2[y, x + 1] + ii2[y + 1, x] - ii2[y, x]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out = \
        np.zeros((h, w), dtype=np.uint8)
    cdef double n = <double>(window * window)
    cdef double s1, s2, m, var, s, threshold
    for y in range(h):
        for x in range(w):
            s1 = <double>(ii1[y + window, x + window] - ii1[y, x + window]
                          - ii1[y + window, x] + ii1[y, x])
            s2 = <double>(ii2[y + window, x + window] - ii2[y, x + window]
                          - ii2[y + window, x] + ii2[y, x])
            m = s1 / n
            var = s2 / n - m * m
            if var < 0.0:
                var = 0.0
            s = sqrt(var)
            threshold = m * (1.0 + k * (s / r_dynamic - 1.0))
            if img[y, x] < threshold:
                out[y, x] = 1
    return out.view(bool)
