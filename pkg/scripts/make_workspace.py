"""Write a synthetic input set and run.toml for trying the command-line tool.

    python scripts/make_workspace.py demo
    cd demo && simpleqe train --config run.toml --out out
"""
import argparse

from simpleqe.synthetic import write_workspace


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sources", type=int, default=24)
    ap.add_argument("--articles", type=int, default=12)
    args = ap.parse_args()
    files = write_workspace(args.directory, args.seed, args.sources, args.articles)
    print(f"wrote {len(files)} files under {args.directory}")


if __name__ == "__main__":
    main()
