"""Run every experiment at its default (acceptance) configuration.

Writes one JSON report per experiment into the output directory and prints
a summary line for each.
"""

import argparse
import pathlib

from ratiolab.harness import EXPERIMENTS, default_config, run_experiment, write_reports


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="reports")
    parser.add_argument("--skip", nargs="*", default=[], choices=EXPERIMENTS)
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name in EXPERIMENTS:
        if name in args.skip:
            continue
        cfg = default_config(name)
        reports = run_experiment(cfg)
        write_reports(reports, "json", str(out / f"{name}.json"))
        for r in reports:
            status = "pass" if r.passed else "FAIL"
            print(f"{name:16s} {status}  lhs={r.lhs.real:.6g}  rhs={r.rhs.value.real:.6g}  "
                  f"gap={r.relative_gap:.2e}  ({r.runtime_s:.1f} s)")


if __name__ == "__main__":
    main()
