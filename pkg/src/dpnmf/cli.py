"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import data_io
from .accountant import linear_composition_epsilon, overall_epsilon
from .matrix_core import Hyperparams
from .metrics import masked_rmse, objective_value, top_k_terms
from .privacy import PrivacyParams, fit_dp, noise_scales, sensitivity_a, sensitivity_b
from .solver import NumericalError, fit

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_matrix(path):
    path = str(path)
    if path.endswith((".mtx", ".coo")):
        return data_io.load_coordinate(path)
    return data_io.load_dense_csv(path)


def _add_fit_args(p):
    p.add_argument("--input", required=True)
    p.add_argument("--clean")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.1)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--eta-h", type=float, default=0.05)
    p.add_argument("--eta-w", type=float, default=None)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--inner-iters", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--normalize", choices=["unit-max", "unit-l2-clip", "none"], default="none")
    p.add_argument("--out", required=True)


def build_parser():
    parser = _Parser(prog="dpnmf", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file; command-line flags take precedence")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="non-private robust NMF")
    _add_fit_args(p)

    p = sub.add_parser("fit-dp", help="differentially-private robust NMF")
    _add_fit_args(p)
    p.set_defaults(normalize="unit-l2-clip")
    p.add_argument("--eps-t", type=float, required=True)
    p.add_argument("--delta", type=float, default=1e-5)
    p.add_argument("--no-outliers", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transcript", help="run as a curator/analyst exchange and save its transcript")

    p = sub.add_parser("account", help="overall (epsilon, delta) of a private run")
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps-t", type=float, required=True)
    p.add_argument("--delta", type=float, default=1e-5)
    p.add_argument("--outliers", dest="outliers", action="store_true", default=True)
    p.add_argument("--no-outliers", dest="outliers", action="store_false")

    p = sub.add_parser("contaminate", help="inject uniform outliers")
    p.add_argument("--input", required=True)
    p.add_argument("--col-frac", type=float, default=0.1)
    p.add_argument("--entry-frac", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="objective value or masked RMSE")
    p.add_argument("--clean")
    p.add_argument("--w")
    p.add_argument("--h")
    p.add_argument("--v")
    p.add_argument("--vhat")
    p.add_argument("--mask")

    p = sub.add_parser("topics", help="top terms per dictionary column")
    p.add_argument("--w", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--k", type=int, default=10)
    return parser


def read_config(path):
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _config_argv(config, subparser):
    """Turn config entries into flags for ``subparser``."""
    argv = []
    for action in subparser._actions:
        flag = action.option_strings[-1] if action.option_strings else None
        if flag is None:
            continue
        key = flag.lstrip("-").replace("-", "_")
        if key not in config:
            continue
        value = config[key]
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(flag)
        else:
            argv += [flag, value]
    return argv


def parse_args(argv):
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        config = read_config(known.config)
        pos = next((i for i, tok in enumerate(argv) if tok in COMMANDS), None)
        if pos is not None:
            subparser = parser._subparsers._group_actions[0].choices[argv[pos]]
            # file values go first so explicit flags override them
            argv = argv[:pos + 1] + _config_argv(config, subparser) + argv[pos + 1:]
    return parser.parse_args(argv)


def _hyperparams(args, model_outliers=True):
    return Hyperparams(
        k=args.k, lam=args.lam, m=args.m, eta_h=args.eta_h, eta_w=args.eta_w,
        outer_iters=args.iters, inner_iters=args.inner_iters, tol=args.tol,
        model_outliers=model_outliers,
    )


def _write_run(out, manifest, trajectory, **matrices):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for name, x in matrices.items():
        data_io.save_dense_csv(out / f"{name}.csv", x)
    with open(out / "trajectory.jsonl", "w", encoding="utf-8") as fh:
        for rec in trajectory:
            fh.write(json.dumps(rec.as_dict()) + "\n")
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _inputs(args):
    v = data_io.normalize_columns(_load_matrix(args.input), args.normalize)
    clean = None
    if args.clean:
        clean = data_io.normalize_columns(_load_matrix(args.clean), args.normalize)
    return v, clean


def cmd_fit(args):
    v, clean = _inputs(args)
    hp = _hyperparams(args)
    res = fit(v, hp, clean=clean)
    _write_run(args.out, {"command": "fit", **vars(args)}, res.trajectory,
               w=res.w, h=res.h, r=res.r)
    print(f"iterations: {len(res.trajectory)}")
    if len(res.trajectory):
        print(f"final loss: {res.trajectory.records[-1].loss:.10g}")


def cmd_fit_dp(args):
    v, clean = _inputs(args)
    model_outliers = not args.no_outliers
    hp = _hyperparams(args, model_outliers)
    pp = PrivacyParams(args.eps_t, args.delta, model_outliers, args.seed)
    res = fit_dp(v, hp, pp, clean=clean)
    if args.transcript:
        from .federation import run_protocol

        w, transcript = run_protocol(v, hp, pp)
        if not np.array_equal(w, res.w):
            raise NumericalError("protocol run diverged from the monolithic run")
        Path(args.transcript).parent.mkdir(parents=True, exist_ok=True)
        Path(args.transcript).write_text("".join(line + "\n" for line in transcript),
                                         encoding="utf-8")
    spend = res.spend
    manifest = {
        "command": "fit-dp", **vars(args),
        "eta_w_resolved": hp.eta_h / 1e4 if hp.eta_w is None else hp.eta_w,
        "epsilon_overall": spend.epsilon, "alpha_opt": spend.alpha_opt,
    }
    _write_run(args.out, manifest, res.trajectory, w=res.w)
    print(f"overall epsilon: {spend.epsilon:.6g} (delta={spend.delta:g}, "
          f"alpha_opt={spend.alpha_opt:.6g}, T={spend.t})")


def cmd_account(args):
    n = args.n
    tau_a, tau_b = noise_scales(n, args.eps_t, args.delta, args.outliers)
    spend = overall_epsilon(args.iters, sensitivity_a(n), tau_a,
                            sensitivity_b(n, args.outliers), tau_b, args.delta)
    naive = linear_composition_epsilon([args.eps_t] * (2 * args.iters))
    print(f"tau_a: {tau_a:.6g}")
    print(f"tau_b: {tau_b:.6g}")
    print(f"epsilon: {spend.epsilon:.6g}")
    print(f"alpha_opt: {spend.alpha_opt:.6g}")
    print(f"delta: {spend.delta:g}")
    print(f"linear composition epsilon: {naive:.6g}")


def cmd_contaminate(args):
    v = _load_matrix(args.input)
    out, mask = data_io.contaminate(v, args.col_frac, args.entry_frac, args.seed)
    dest = Path(args.out)
    dest.mkdir(parents=True, exist_ok=True)
    data_io.save_dense_csv(dest / "contaminated.csv", out)
    data_io.save_dense_csv(dest / "mask.csv", mask.astype(float))
    with open(dest / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump({"command": "contaminate", **vars(args)}, fh, indent=2, sort_keys=True)
    print(f"contaminated entries: {int(mask.sum())}")


def cmd_eval(args):
    if args.clean and args.w and args.h:
        clean = _load_matrix(args.clean)
        val = objective_value(clean, data_io.load_dense_csv(args.w), data_io.load_dense_csv(args.h))
        print(f"objective: {val:.10g}")
    elif args.v and args.vhat and args.mask:
        val = masked_rmse(data_io.load_dense_csv(args.v, allow_negative=True),
                          data_io.load_dense_csv(args.vhat, allow_negative=True),
                          data_io.load_mask_csv(args.mask))
        print(f"rmse: {val:.10g}")
    else:
        raise UsageError("eval needs either --clean/--w/--h or --v/--vhat/--mask")


def cmd_topics(args):
    w = data_io.load_dense_csv(args.w)
    vocab = data_io.load_vocabulary(args.vocab)
    for i, terms in enumerate(top_k_terms(w, vocab, args.k), start=1):
        print(f"topic {i}: {' '.join(terms)}")


COMMANDS = {
    "fit": cmd_fit,
    "fit-dp": cmd_fit_dp,
    "account": cmd_account,
    "contaminate": cmd_contaminate,
    "eval": cmd_eval,
    "topics": cmd_topics,
}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (data_io.DataError, ValueError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
