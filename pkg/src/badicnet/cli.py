"""Command line front end: net generation, verification, and studies.

Exit codes: 0 success / checks passed, 1 a verification failed,
2 usage or parameter error, 3 a resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import re
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

import numpy as np

from .badic import in_E
from .dual import (
    GUARD_DEFAULT,
    certify_rho2_via_independence,
    check_independence_sets,
    dual_contains,
    dual_enumerate_below,
    rho2_min_weight,
)
from .discrepancy import l2_star, lp_star
from .nets import (
    DigitalNet,
    enumerate_points,
    hammersley_matrices,
    hammersley_point_set,
    net_from_json,
    net_to_json,
    points_to_csv,
    sym_hammersley_points,
    symmetrize_matrices,
    to_point_set,
    truncated_sym_hammersley,
)
from .rkhs import (
    BandLimitedKernel,
    SpectralDiagonalKernel,
    wce_direct,
    wce_spectral,
)
from .walsh import KVector, character_sum_over


def _dump_json(doc, fh) -> None:
    text = json.dumps(doc, indent=1)
    text = re.sub(r"\[\s+((?:-?\d+,?\s+)*-?\d+)\s+\]", lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text)
    fh.write(text + "\n")


@contextmanager
def _out_stream(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _load_net(args) -> DigitalNet:
    if getattr(args, "infile", None):
        with open(args.infile) as fh:
            return net_from_json(fh.read())
    kind = getattr(args, "kind", "hammersley")
    if args.base is None or args.m is None:
        raise ValueError("need --base and --m (or --in)")
    return _net_by_kind(kind, args.base, args.m, getattr(args, "n", None))


def _net_by_kind(kind: str, base: int, m: int, n: int | None) -> DigitalNet:
    if kind == "hammersley":
        return hammersley_matrices(base, m, n)
    if kind == "sym-hammersley":
        return symmetrize_matrices(hammersley_matrices(base, m, n))
    if kind == "sym-hammersley-truncated":
        return truncated_sym_hammersley(base, m, m + 2 if n is None else n)
    raise ValueError(f"unknown net kind {kind!r}")


def _parse_m_range(text: str) -> range:
    lo, _, hi = text.partition(":")
    if not _:
        v = int(text)
        return range(v, v + 1)
    return range(int(lo), int(hi) + 1)


def _parse_kernel(spec: str, base: int, s: int, seed: int):
    name, _, rest = spec.partition(":")
    kv = {}
    if rest:
        for part in rest.split(","):
            key, _, val = part.partition("=")
            kv[key.strip()] = val.strip()
    if name == "diagonal":
        alpha = float(kv.get("alpha", 1.0))
        gamma = float(kv.get("gamma", 1.0))
        return SpectralDiagonalKernel(base, s, alpha, (gamma,) * s)
    if name == "bandlimited":
        kd = int(kv.get("k", 2))
        rank = int(kv.get("rank", 4))
        rng = np.random.default_rng(seed)
        return BandLimitedKernel.random(base, s, kd, rank, rng)
    raise ValueError(f"unknown kernel spec {spec!r}")


# ---------------------------------------------------------------------------
# net commands


def cmd_net_gen(args) -> int:
    if args.kind == "custom-json":
        if not args.infile:
            raise ValueError("custom-json needs --in")
        net = _load_net(args)
    else:
        if args.base is None or args.m is None:
            raise ValueError("need --base and --m")
        net = _net_by_kind(args.kind, args.base, args.m, args.n)
    with _out_stream(args.out) as fh:
        fh.write(net_to_json(net) + "\n")
    if args.points_csv:
        with _out_stream(args.points_csv) as fh:
            points_to_csv(enumerate_points(net), fh)
    return 0


def cmd_net_symmetrize(args) -> int:
    with open(args.infile) as fh:
        net = net_from_json(fh.read())
    sym = symmetrize_matrices(net)
    with _out_stream(args.out) as fh:
        fh.write(net_to_json(sym) + "\n")
    if args.points_csv:
        with _out_stream(args.points_csv) as fh:
            points_to_csv(enumerate_points(sym), fh)
    return 0


def cmd_net_points(args) -> int:
    net = _load_net(args)
    with _out_stream(args.out) as fh:
        points_to_csv(enumerate_points(net), fh)
    return 0


# ---------------------------------------------------------------------------
# verify commands


def cmd_verify_dual(args) -> int:
    inner = _load_net(args)
    sym = symmetrize_matrices(inner)
    kb = args.kbound
    sym_side = set(dual_enumerate_below(sym, kb, args.max_candidates))
    raw = dual_enumerate_below(inner, kb, args.max_candidates)
    filtered = {k for k in raw if all(in_E(kj, inner.base) for kj in k)}
    passed = sym_side == filtered
    report = {
        "passed": passed,
        "kbound_digits": kb,
        "dual_sym": len(sym_side),
        "dual_inner_in_E": len(filtered),
        "examples": [list(k) for k in sorted(sym_side)[:5]],
    }
    with _out_stream(args.out) as fh:
        _dump_json(report, fh)
    return 0 if passed else 1


def cmd_verify_orthogonality(args) -> int:
    net = _load_net(args)
    points = enumerate_points(net)
    N = len(points)
    b, n, s = net.base, net.n, net.s
    rng = np.random.default_rng(args.seed)
    full = zero = bad = 0
    for _ in range(args.samples):
        ks = tuple(int(v) for v in rng.integers(0, b**n, size=s))
        cs = character_sum_over(points, KVector.of(b, *ks))
        if dual_contains(net, ks):
            ok = cs.equals_int(N)
            full += 1
        else:
            ok = cs.is_zero()
            zero += 1
        if not ok:
            bad += 1
    report = {"passed": bad == 0, "samples": args.samples, "dual_hits": full, "nondual": zero, "failures": bad}
    with _out_stream(args.out) as fh:
        _dump_json(report, fh)
    return 0 if bad == 0 else 1


def cmd_verify_independence(args) -> int:
    net = truncated_sym_hammersley(args.base, args.m, args.n if args.n else 2 * args.m + 1)
    report = check_independence_sets(net)
    with _out_stream(args.out) as fh:
        _dump_json(report.to_json_dict(), fh)
    return 0 if report.all_passed else 1


def cmd_verify_rho2(args) -> int:
    net = _load_net(args)
    cap = args.cap if args.cap else 2 * net.n
    res = rho2_min_weight(net, cap, args.max_candidates)
    certified = res.certified_by
    if res.exceeded and net.s == 2 and cap <= 2 * net.m:
        try:
            if certify_rho2_via_independence(net, cap):
                certified = "enumeration+independence"
        except ValueError:
            pass
    doc = res.to_json_dict()
    doc["certified_by"] = certified
    with _out_stream(args.out) as fh:
        _dump_json(doc, fh)
    return 0


# ---------------------------------------------------------------------------
# study commands


def _threads(args) -> int:
    if args.threads:
        return args.threads
    return int(os.environ.get("QMC_THREADS", "1"))


def _csv_row(values) -> str:
    cells = []
    for v in values:
        t = str(v)
        cells.append(f'"{t}"' if "," in t else t)
    return ",".join(cells) + "\n"


def _run_rows(rows, worker, threads: int):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(worker, rows))
    return [worker(r) for r in rows]


def cmd_study_discrepancy(args) -> int:
    kinds = args.kinds.split(",")
    ps = [int(p) if p.lstrip("+-").isdigit() else float(p) for p in args.p.split(",")]
    rows = [(kind, m, p) for kind in kinds for m in _parse_m_range(args.m_range) for p in ps]
    skipped = []

    def worker(row):
        kind, m, p = row
        if kind == "hammersley":
            pts = hammersley_point_set(args.base, m)
        elif kind == "sym-hammersley":
            pts = sym_hammersley_points(args.base, m)
        else:
            raise ValueError(f"unknown study kind {kind!r}")
        N = pts.n_points
        if N * N > args.max_ops:
            return None
        res = l2_star(pts) if p == 2 else lp_star(pts, p)
        # log_b N: m digits for Hammersley, m+2 after symmetrization
        logn = m if kind == "hammersley" else m + 2
        scaled = res.value * N / math.sqrt(logn)
        return (kind, args.base, m, N, p, res.method, res.value, res.error_bound, scaled)

    out_rows = _run_rows(rows, worker, _threads(args))
    with _out_stream(args.out) as fh:
        fh.write("# schema=1\n")
        fh.write("kind,base,m,N,p,method,value,error_bound,value_n_over_sqrt_logn\n")
        for row, res in zip(rows, out_rows):
            if res is None:
                skipped.append(row)
                continue
            fh.write(_csv_row(res))
    for row in skipped:
        print(f"warning: skipped {row}: N^2 over --max-ops", file=sys.stderr)
    return 0


def cmd_study_wce(args) -> int:
    rows = list(_parse_m_range(args.m_range))

    def worker(m):
        n = m + args.n_extra
        net = symmetrize_matrices(hammersley_matrices(args.base, m, n))
        if net.n_points**2 > args.max_ops:
            return None
        kernel = _parse_kernel(args.kernel, args.base, net.s, args.seed)
        direct = wce_direct(enumerate_points(net), kernel)
        cap = min(args.cap, n) if args.cap else None
        spectral = wce_spectral(net, kernel, cap=cap, max_candidates=args.max_candidates)
        ok = abs(direct.value - spectral.value) <= spectral.tail_bound + 1e-10
        return (
            args.base,
            m,
            n,
            net.n_points,
            args.kernel,
            direct.value,
            spectral.value,
            spectral.tail_bound,
            spectral.terms_used,
            ok,
        )

    out_rows = _run_rows(rows, worker, _threads(args))
    all_ok = True
    with _out_stream(args.out) as fh:
        fh.write("# schema=1\n")
        fh.write("base,m,n,N,kernel,value_direct,value_spectral,tail_bound,terms_used,within_tail\n")
        for m, res in zip(rows, out_rows):
            if res is None:
                print(f"warning: skipped m={m}: N^2 over --max-ops", file=sys.stderr)
                continue
            all_ok = all_ok and res[-1]
            fh.write(_csv_row(res))
    return 0 if all_ok else 1


def cmd_study_convergence(args) -> int:
    rows = list(_parse_m_range(args.m_range))

    def worker(m):
        ham = hammersley_point_set(args.base, m)
        sym = sym_hammersley_points(args.base, m)
        if max(ham.n_points, sym.n_points) ** 2 > args.max_ops:
            return None
        l2h = l2_star(ham).value
        l2s = l2_star(sym).value
        return (
            args.base,
            m,
            ham.n_points,
            l2h,
            l2h * ham.n_points / m,
            sym.n_points,
            l2s,
            l2s * sym.n_points / math.sqrt(m + 2),
        )

    out_rows = _run_rows(rows, worker, _threads(args))
    with _out_stream(args.out) as fh:
        fh.write("# schema=1\n")
        fh.write("base,m,N_ham,l2_ham,ham_n_over_logn,N_sym,l2_sym,sym_n_over_sqrt_logn\n")
        for m, res in zip(rows, out_rows):
            if res is None:
                print(f"warning: skipped m={m}: N^2 over --max-ops", file=sys.stderr)
                continue
            fh.write(_csv_row(res))
    return 0


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="badicnet", description=__doc__)
    p.add_argument("--threads", type=int, default=0, help="worker threads (QMC_THREADS env as fallback)")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_net_args(sp, with_kind=True):
        if with_kind:
            sp.add_argument("--kind", default="hammersley",
                            choices=["hammersley", "sym-hammersley", "sym-hammersley-truncated", "custom-json"])
        sp.add_argument("--base", type=int)
        sp.add_argument("--m", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--in", dest="infile")

    net = sub.add_parser("net", help="generate and transform nets")
    netsub = net.add_subparsers(dest="sub", required=True)
    g = netsub.add_parser("gen")
    add_net_args(g)
    g.add_argument("--out", default="-")
    g.add_argument("--points-csv")
    g.set_defaults(func=cmd_net_gen)
    sy = netsub.add_parser("symmetrize")
    sy.add_argument("--in", dest="infile", required=True)
    sy.add_argument("--out", default="-")
    sy.add_argument("--points-csv")
    sy.set_defaults(func=cmd_net_symmetrize)
    pp = netsub.add_parser("points")
    add_net_args(pp)
    pp.add_argument("--out", default="-")
    pp.set_defaults(func=cmd_net_points)

    ver = sub.add_parser("verify", help="exact identity checks")
    versub = ver.add_subparsers(dest="sub", required=True)
    vd = versub.add_parser("dual")
    add_net_args(vd)
    vd.add_argument("--kbound", type=int, required=True, help="digits per component in the search box")
    vd.add_argument("--max-candidates", type=int, default=GUARD_DEFAULT)
    vd.add_argument("--out", default="-")
    vd.set_defaults(func=cmd_verify_dual)
    vo = versub.add_parser("orthogonality")
    add_net_args(vo)
    vo.add_argument("--samples", type=int, default=200)
    vo.add_argument("--seed", type=int, default=0)
    vo.add_argument("--out", default="-")
    vo.set_defaults(func=cmd_verify_orthogonality)
    vi = versub.add_parser("independence")
    vi.add_argument("--base", type=int, required=True)
    vi.add_argument("--m", type=int, required=True)
    vi.add_argument("--n", type=int)
    vi.add_argument("--out", default="-")
    vi.set_defaults(func=cmd_verify_independence)
    vr = versub.add_parser("rho2")
    add_net_args(vr)
    vr.add_argument("--cap", type=int)
    vr.add_argument("--max-candidates", type=int, default=GUARD_DEFAULT)
    vr.add_argument("--out", default="-")
    vr.set_defaults(func=cmd_verify_rho2)

    study = sub.add_parser("study", help="tabulated computations over families")
    stsub = study.add_subparsers(dest="sub", required=True)
    sd = stsub.add_parser("discrepancy")
    sd.add_argument("--base", type=int, required=True)
    sd.add_argument("--m-range", required=True, help="A:B inclusive, or one value")
    sd.add_argument("--p", default="2")
    sd.add_argument("--kinds", default="hammersley,sym-hammersley")
    sd.add_argument("--max-ops", type=int, default=1 << 28)
    sd.add_argument("--out", default="-")
    sd.set_defaults(func=cmd_study_discrepancy)
    sw = stsub.add_parser("wce")
    sw.add_argument("--base", type=int, required=True)
    sw.add_argument("--m-range", required=True)
    sw.add_argument("--kernel", default="diagonal:alpha=1,gamma=1")
    sw.add_argument("--n-extra", type=int, default=8)
    sw.add_argument("--cap", type=int)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--max-ops", type=int, default=1 << 28)
    sw.add_argument("--max-candidates", type=int, default=GUARD_DEFAULT)
    sw.add_argument("--out", default="-")
    sw.set_defaults(func=cmd_study_wce)
    sc = stsub.add_parser("convergence")
    sc.add_argument("--base", type=int, required=True)
    sc.add_argument("--m-range", required=True)
    sc.add_argument("--max-ops", type=int, default=1 << 28)
    sc.add_argument("--out", default="-")
    sc.set_defaults(func=cmd_study_convergence)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3 if str(exc).startswith("guard exceeded") else 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
