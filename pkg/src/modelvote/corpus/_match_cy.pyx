# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled phrase-matching kernel.

Same contract as the pure-Python kernel in ``_match_py``: documents and
terms arrive as flattened arrays of integer word ids over a shared
vocabulary (id -1 marks a document word outside the term vocabulary), and
``out[d, t]`` is set to 1 when document ``d`` contains term ``t`` as a
contiguous word phrase. Runs without the GIL so chunks can be matched on
worker threads in parallel.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def match_chunk(
    cnp.int32_t[::1] tokens,
    cnp.int64_t[::1] doc_bounds,
    cnp.int32_t[::1] terms,
    cnp.int32_t[::1] term_bounds,
    cnp.int32_t[::1] cand_start,
    cnp.int32_t[::1] cand_terms,
    cnp.uint8_t[:, ::1] out,
):
    cdef Py_ssize_t n_docs = doc_bounds.shape[0] - 1
    cdef Py_ssize_t d, pos, lo, hi, c, t, t_lo, t_hi, k, length
    cdef cnp.int32_t w
    cdef bint hit

    with nogil:
        for d in range(n_docs):
            lo = doc_bounds[d]
            hi = doc_bounds[d + 1]
            for pos in range(lo, hi):
                w = tokens[pos]
                if w < 0:
                    continue
                for c in range(cand_start[w], cand_start[w + 1]):
                    t = cand_terms[c]
                    if out[d, t]:
                        continue
                    t_lo = term_bounds[t]
                    t_hi = term_bounds[t + 1]
                    length = t_hi - t_lo
                    if pos + length > hi:
                        continue
                    hit = True
                    for k in range(length):
                        if tokens[pos + k] != terms[t_lo + k]:
                            hit = False
                            break
                    if hit:
                        out[d, t] = 1
    return np.asarray(out)
