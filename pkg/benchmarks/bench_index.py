"""Benchmark the compiled matching kernel against the pure-Python fallback.

Builds a seeded synthetic corpus once, then times index construction
through both kernels at several worker counts. The compiled kernel
releases the GIL, so it is the only one that actually gains from threads.

    python benchmarks/bench_index.py --docs 20000 --terms 50
"""

from __future__ import annotations

import argparse
import statistics
import time

from modelvote.corpus import (
    build_inverted_index,
    generate_synthetic_corpus,
    kernel_name,
    synthetic_term_list,
)


def time_build(docs, terms, kernel, workers, repeats):
    samples = []
    result = None
    for _ in range(repeats):
        started = time.perf_counter()
        result = build_inverted_index(docs, terms, kernel=kernel, workers=workers)
        samples.append(time.perf_counter() - started)
    return min(samples), statistics.mean(samples), result


def time_match_stage(docs, terms, repeats):
    """Time the matching kernels alone on pre-encoded token arrays."""
    import numpy as np

    from modelvote.corpus import _match_py
    from modelvote.corpus.indexing import _build_term_table, _encode_chunk

    table = _build_term_table(terms)
    tokens, bounds = _encode_chunk(docs, table.vocab, {})
    kernels = {"python": _match_py}
    try:
        from modelvote.corpus import _match_cy

        kernels["compiled"] = _match_cy
    except ImportError:
        pass

    timings = {}
    outputs = {}
    for name, impl in kernels.items():
        samples = []
        for _ in range(repeats):
            out = np.zeros((len(docs), len(table.keys)), dtype=np.uint8)
            started = time.perf_counter()
            impl.match_chunk(tokens, bounds, table.terms, table.term_bounds,
                             table.cand_start, table.cand_terms, out)
            samples.append(time.perf_counter() - started)
        timings[name] = min(samples)
        outputs[name] = out
    if len(outputs) == 2:
        assert (outputs["python"] == outputs["compiled"]).all()
    return timings


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=20000)
    parser.add_argument("--terms", type=int, default=50)
    parser.add_argument("--seed", type=int, default=17)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--workers", type=int, nargs="+", default=[1, 4, 8])
    args = parser.parse_args()

    terms = synthetic_term_list(args.terms, seed=args.seed)
    docs, _ = generate_synthetic_corpus(args.seed, args.docs, terms, 0.5)
    total_words = sum(len(d.text.split()) for d in docs)
    print(f"corpus: {args.docs} docs, {total_words} words, {args.terms} diseases")
    print(f"import-time kernel: {kernel_name()}")
    print()

    kernels = ["python"]
    if kernel_name() == "compiled":
        kernels.insert(0, "compiled")
    else:
        print("compiled kernel unavailable; timing the fallback only\n")

    print("end-to-end index build (tokenize + encode + match + merge):")
    print(f"{'kernel':<10} {'workers':>7} {'best':>9} {'mean':>9} {'docs/s':>10}")
    reference = None
    for kernel in kernels:
        for workers in args.workers:
            best, mean, result = time_build(docs, terms, kernel, workers, args.repeats)
            if reference is None:
                reference = result
            elif result != reference:
                raise SystemExit("kernels disagree; benchmark aborted")
            print(
                f"{kernel:<10} {workers:>7} {best:>8.3f}s {mean:>8.3f}s "
                f"{args.docs / best:>10.0f}"
            )
    print("\nmatching stage alone (pre-encoded tokens):")
    timings = time_match_stage(docs, terms, args.repeats)
    for name in ("compiled", "python"):
        if name in timings:
            print(f"{name:<10} {timings[name] * 1000:>8.1f} ms")
    if "compiled" in timings:
        print(f"speedup: {timings['python'] / timings['compiled']:.1f}x")
    print("\nall kernel/worker combinations produced identical indexes")


if __name__ == "__main__":
    main()
