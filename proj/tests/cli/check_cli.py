#!/usr/bin/env python3
"""Runs one ietlab command twice and checks byte-identical output, schema
validity and a few expected values.

usage: check_cli.py --bin PATH --schemas DIR [--exit N] [--stderr TEXT]
                    [--expect PATH=VALUE ...] [--format csv] -- ARGS...
"""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def lookup(doc, path):
    for part in path.split("."):
        doc = doc[int(part)] if isinstance(doc, list) else doc[part]
    return doc


def compare(actual, op, expected):
    if op == "=":
        return actual == json.loads(expected)
    if op == "<":
        return actual < float(expected)
    if op == ">":
        return actual > float(expected)
    raise ValueError(op)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bin", required=True)
    ap.add_argument("--schemas", required=True)
    ap.add_argument("--exit", type=int, default=0)
    ap.add_argument("--stderr", default=None)
    ap.add_argument("--expect", action="append", default=[])
    ap.add_argument("--format", default="json")
    ap.add_argument("args", nargs=argparse.REMAINDER)
    opt = ap.parse_args()
    args = opt.args[1:] if opt.args and opt.args[0] == "--" else opt.args
    sub = args[0]

    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        for run in range(2):
            path = pathlib.Path(tmp) / f"run{run}.{opt.format}"
            cmd = [opt.bin, *args, "--format", opt.format, "--out", str(path)]
            proc = subprocess.run(cmd, capture_output=True, text=True)
            if proc.returncode != opt.exit:
                sys.exit(f"{cmd}: exit {proc.returncode}, wanted {opt.exit}\n{proc.stderr}")
            if opt.stderr is not None and opt.stderr not in proc.stderr:
                sys.exit(f"stderr lacks '{opt.stderr}': {proc.stderr}")
            outs.append(path.read_bytes() if path.exists() else None)
        if opt.exit != 0:
            print(f"ok: exit {opt.exit}")
            return
        if outs[0] != outs[1]:
            sys.exit("outputs differ between identical runs")
        if opt.format == "csv":
            print(f"ok: {len(outs[0].splitlines())} csv lines, reproducible")
            return
        doc = json.loads(outs[0])
        schema = json.loads((pathlib.Path(opt.schemas) / f"{sub}.schema.json").read_text())
        jsonschema.validate(doc, schema)
        for e in opt.expect:
            for op in ("<", ">", "="):
                if op in e:
                    path, value = e.split(op, 1)
                    break
            got = lookup(doc, path)
            if not compare(got, op, value):
                sys.exit(f"{path}: got {got!r}, wanted {op}{value}")
        print("ok: reproducible and schema-valid")


if __name__ == "__main__":
    main()
