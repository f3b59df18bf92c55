"""Command-line driver: probe, train, predict, eval.

Exit codes: 0 success, 1 runtime failure (IO, format, numerics), 2 usage
error (bad or missing flags). All commands are deterministic for a fixed
flag set; reports are key-value text plus optional CSV artifacts.
"""

import argparse
import csv
import sys

from . import configure, network
from .data import load_csv, split_dataset
from .errors import DimensionMismatch, LayerwiseError
from .trainer import TrainConfig


def _int_list(text: str) -> tuple:
    return tuple(int(part) for part in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerwise",
        description="Grow and run layer-by-layer trained networks on CSV datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--data", required=True, help="CSV file, one sample per row: inputs then targets")
    data.add_argument("--inputs", required=True, type=int, help="number of input columns")
    data.add_argument("--targets", required=True, type=int, help="number of target columns")

    split = argparse.ArgumentParser(add_help=False)
    split.add_argument("--test-fraction", type=float, default=0.25)
    split.add_argument("--seed", type=int, default=42)

    train = argparse.ArgumentParser(add_help=False)
    train.add_argument("--max-cycles", type=int, default=200)
    train.add_argument("--patience", type=int, default=20)
    train.add_argument("--step-scale", type=float, default=0.15)
    train.add_argument("--activation", choices=("rect_amp", "sigmoid"), default="rect_amp")

    growth = argparse.ArgumentParser(add_help=False)
    growth.add_argument("--probe-widths", type=_int_list, default=(1, 2, 3, 4),
                        help="comma-separated widths for the model-fitting probes")
    growth.add_argument("--beta-width", type=int, default=8)
    growth.add_argument("--max-layers", type=int, default=8)
    growth.add_argument("--probe-mode", choices=(configure.TRAINED, configure.UNTRAINED),
                        default=configure.TRAINED)
    growth.add_argument("--jobs", type=int, default=1, help="concurrent probe sessions")

    p = sub.add_parser("probe", parents=[data, split, train, growth], aliases=["configure"],
                       help="fit the error model and report the suggested first width")
    p.add_argument("--out", help="write the probe table (p,k,sigma2) as CSV here")
    p.set_defaults(func=cmd_probe)

    t = sub.add_parser("train", parents=[data, split, train, growth],
                       help="grow a network and save it")
    t.add_argument("--model", required=True, help="output path for the model file")
    t.add_argument("--history", help="write per-cycle training history CSV here")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", parents=[data], help="run a saved model over a dataset")
    pr.add_argument("--model", required=True)
    pr.add_argument("--out", help="predictions CSV (default: stdout)")
    pr.set_defaults(func=cmd_predict)

    ev = sub.add_parser("eval", parents=[data], help="report cost and mse of a saved model")
    ev.add_argument("--model", required=True)
    ev.set_defaults(func=cmd_eval)
    return parser


def _growth_config(args) -> configure.GrowthConfig:
    train_cfg = TrainConfig(
        max_cycles=args.max_cycles,
        patience=args.patience,
        step_scale=args.step_scale,
        seed=args.seed,
        activation=args.activation,
    )
    return configure.GrowthConfig(
        probe_widths=args.probe_widths,
        beta_probe_width=args.beta_width,
        max_layers=args.max_layers,
        train=train_cfg,
        probe_mode=args.probe_mode,
    )


def _load_split(args):
    ds = load_csv(args.data, args.inputs, args.targets)
    return ds, split_dataset(ds, args.test_fraction, args.seed)


def _check_model_input(net, ds):
    if net.in_dim != ds.n_inputs:
        raise DimensionMismatch(
            f"model expects {net.in_dim} input features but the data file has {ds.n_inputs}"
        )


def cmd_probe(args) -> None:
    _, split = _load_split(args)
    gcfg = _growth_config(args)
    est = configure.estimate_model(split, gcfg, jobs=args.jobs)
    lines = [
        f"probe_mode {gcfg.probe_mode}",
        f"train_samples {split.train.n_samples}",
        f"test_samples {split.test.n_samples}",
    ]
    table = list(est.probes) + [est.beta_probe]
    for pr in table:
        lines.append(f"probe p={pr.p} k={pr.k} sigma2={pr.sigma2!r}")
    if est.model is None:
        lines.append("model unfit (falling back to the beta probe width)")
    else:
        lines.append(f"alpha {est.model.alpha!r}")
        lines.append(f"lambda {est.model.lam!r}")
        lines.append(f"beta {est.model.beta!r}")
        lines.append(f"k_real {est.k_real!r}")
        lines.append(f"k_o {est.k_o}")
    lines.append(f"p0 {est.width}")
    print("\n".join(lines))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "k", "sigma2"])
            for pr in table:
                writer.writerow([pr.p, pr.k, repr(pr.sigma2)])


def _write_history(path, reports) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["layer", "cycle", "train_cost", "test_cost", "delta", "is_best"])
        for rep in reports:
            for c in rep.history:
                writer.writerow([
                    rep.index, c.cycle, repr(c.train_cost), repr(c.test_cost),
                    repr(c.delta), "true" if c.is_best else "false",
                ])


def cmd_train(args) -> None:
    ds, split = _load_split(args)
    gcfg = _growth_config(args)
    result = configure.grow_network(split, gcfg, jobs=args.jobs)
    net = result.network
    cost, mse = network.evaluate(net, ds.inputs, ds.targets)
    meta = dict(net.meta)
    meta["dataset_cost"] = cost
    meta["dataset_mse"] = mse
    net = network.Network(net.layers, net.head, meta)
    network.save(net, args.model)
    if args.history:
        _write_history(args.history, result.layer_reports)
    print(network.summary(net))
    print(f"dataset_cost {cost!r}")
    print(f"dataset_mse {mse!r}")
    print(f"model {args.model}")


def cmd_predict(args) -> None:
    net = network.load(args.model)
    ds = load_csv(args.data, args.inputs, args.targets)
    _check_model_input(net, ds)
    preds = network.forward(net, ds.inputs)
    rows = [[f"p{i + 1}" for i in range(preds.shape[0])]]
    rows += [[repr(float(v)) for v in col] for col in preds.T]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    else:
        csv.writer(sys.stdout).writerows(rows)


def cmd_eval(args) -> None:
    net = network.load(args.model)
    ds = load_csv(args.data, args.inputs, args.targets)
    _check_model_input(net, ds)
    if net.out_dim != ds.n_targets:
        raise DimensionMismatch(
            f"model emits {net.out_dim} targets but the data file has {ds.n_targets}"
        )
    cost, mse = network.evaluate(net, ds.inputs, ds.targets)
    print(f"cost {cost!r}")
    print(f"mse {mse!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        args.func(args)
    except (LayerwiseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
