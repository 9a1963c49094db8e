"""Run the full classification and write report.json, report.md and report.csv."""

import argparse
import logging
import os
import time

from pointed8.config import Config
from pointed8.report import build_report


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="results")
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--verify", action="store_true")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    config = Config(cache_dir=args.cache_dir, verify=args.verify)
    t0 = time.perf_counter()
    rep = build_report(config)
    os.makedirs(args.out_dir, exist_ok=True)
    for fmt, ext in (("json", "json"), ("md", "md"), ("csv", "csv")):
        path = os.path.join(args.out_dir, f"report.{ext}")
        with open(path, "w") as fh:
            fh.write(rep.render(fmt))
        logging.info("wrote %s", path)
    m, d = rep.morita, rep.doubles
    print(f"{len(rep.census)} tensor classes, {m['count']} Morita classes, "
          f"{len(d['commutative'])}/{len(d['noncommutative'])} commutative/noncommutative doubles "
          f"({time.perf_counter() - t0:.0f}s)")
    print(m["note"])


if __name__ == "__main__":
    main()
