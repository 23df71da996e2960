"""Pure-Python phrase-matching kernel.

Same contract as the compiled kernel in ``_match_cy.pyx``: documents and
terms arrive as flattened arrays of integer word ids over a shared
vocabulary (id -1 marks a document word outside the term vocabulary), and
``out[d, t]`` is set to 1 when document ``d`` contains term ``t`` as a
contiguous word phrase.
"""

from __future__ import annotations


def match_chunk(tokens, doc_bounds, terms, term_bounds, cand_start, cand_terms, out):
    tok = tokens.tolist()
    dbound = doc_bounds.tolist()
    tws = terms.tolist()
    tbound = term_bounds.tolist()
    cstart = cand_start.tolist()
    cterms = cand_terms.tolist()

    n_docs = len(dbound) - 1
    for d in range(n_docs):
        lo, hi = dbound[d], dbound[d + 1]
        row = out[d]
        for pos in range(lo, hi):
            w = tok[pos]
            if w < 0:
                continue
            for c in range(cstart[w], cstart[w + 1]):
                t = cterms[c]
                if row[t]:
                    continue
                t_lo, t_hi = tbound[t], tbound[t + 1]
                length = t_hi - t_lo
                if pos + length > hi:
                    continue
                if tok[pos : pos + length] == tws[t_lo:t_hi]:
                    row[t] = 1
    return out
