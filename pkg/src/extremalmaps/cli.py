"""Command line interface: classify, generate, and disc subcommands.

Maps travel as JSON documents listing every matrix-unit image:

.. code-block:: json

    {
      "v": 1,
      "in_blocks": [2],
      "out_blocks": [2],
      "images": [
        {"block": 0, "p": 0, "q": 0,
         "value": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]]},
        ...
      ]
    }

``images[n].value`` holds one matrix per output block, entries as
``[re, im]`` pairs; indices are zero based and every unit of every input
block must appear exactly once.  All JSON the tool emits is byte stable:
keys are sorted and separators fixed, so identical inputs give identical
bytes.

Exit codes: 0 accepted, 2 rejected, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .algebra import BlockShape
from .disc import (BlaschkeProduct, DiscCompositionOp,
                   boundary_extremality_check)
from .extremal import (Form1Certificate, Form2Certificate, Superoperator,
                       random_form1, random_form2)
from .numkit import DEFAULT_TOL
from .structure import (classify_extremal_global, classify_pure_preserving,
                        is_jordan_morphism)

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """The JSON document does not describe a valid superoperator."""


# --------------------------------------------------------------------------
# JSON (de)serialization
# --------------------------------------------------------------------------

def _pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _vector_json(v) -> list:
    return [_pair(z) for z in np.asarray(v).ravel()]


def _matrix_json(m) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(m)]


def _matrix_from_json(rows, shape, where: str) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where}: entries must be [re, im] pairs") from exc
    if arr.shape != shape + (2,):
        raise SchemaError(f"{where}: expected shape {shape} of [re, im] pairs, "
                          f"got {arr.shape[:-1] if arr.ndim else arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def superoperator_to_json(psi: Superoperator) -> dict:
    """Plain-dict form of a superoperator, ready for :func:`dump_json`."""
    images = []
    for b, k in enumerate(psi.in_shape):
        for p in range(k):
            for q in range(k):
                value = [_matrix_json(psi.tensors[b][c][:, :, p, q])
                         for c in range(len(psi.out_shape))]
                images.append({"block": b, "p": p, "q": q, "value": value})
    return {"v": SCHEMA_VERSION,
            "in_blocks": list(psi.in_shape.dims),
            "out_blocks": list(psi.out_shape.dims),
            "images": images}


def superoperator_from_json(doc: dict) -> Superoperator:
    """Parse and validate the JSON document form of a superoperator."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    if doc.get("v") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {doc.get('v')!r}")
    for key in ("in_blocks", "out_blocks", "images"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    try:
        in_shape = BlockShape(tuple(int(d) for d in doc["in_blocks"]))
        out_shape = BlockShape(tuple(int(d) for d in doc["out_blocks"]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad block dimensions: {exc}") from exc

    tensors = [[np.zeros((h, h, k, k), dtype=np.complex128) for h in out_shape]
               for k in in_shape]
    seen = set()
    for n, item in enumerate(doc["images"]):
        if not isinstance(item, dict):
            raise SchemaError(f"images[{n}] must be an object")
        try:
            b = int(item["block"])
            p = int(item["p"])
            q = int(item["q"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"images[{n}]: bad block/p/q") from exc
        if not 0 <= b < len(in_shape):
            raise SchemaError(f"images[{n}]: block {b} out of range")
        k = in_shape.dims[b]
        if not (0 <= p < k and 0 <= q < k):
            raise SchemaError(f"images[{n}]: unit ({p},{q}) out of range for "
                              f"a {k} x {k} block")
        if (b, p, q) in seen:
            raise SchemaError(f"images[{n}]: duplicate unit ({b},{p},{q})")
        seen.add((b, p, q))
        value = item.get("value")
        if not isinstance(value, list) or len(value) != len(out_shape):
            raise SchemaError(f"images[{n}]: value must list one matrix per "
                              "output block")
        for c, h in enumerate(out_shape):
            tensors[b][c][:, :, p, q] = _matrix_from_json(
                value[c], (h, h), f"images[{n}].value[{c}]")
    expected = sum(k * k for k in in_shape)
    if len(seen) != expected:
        raise SchemaError(f"incomplete image list: {len(seen)} units given, "
                          f"{expected} required")
    return Superoperator(in_shape, out_shape,
                         tuple(tuple(row) for row in tensors))


def dump_json(obj) -> str:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False) + "\n"


def load_superoperator(path: str) -> Superoperator:
    with open(path, "r", encoding="utf-8") as fh:
        return superoperator_from_json(json.load(fh))


def save_superoperator(psi: Superoperator, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(superoperator_to_json(psi)))


# --------------------------------------------------------------------------
# Report construction
# --------------------------------------------------------------------------

def _certificate_json(cert) -> dict:
    if isinstance(cert, Form1Certificate):
        return {"form": 1,
                "transposed": cert.transposed,
                "left_isometry": _matrix_json(cert.left_isometry),
                "right_isometry": _matrix_json(cert.right_isometry)}
    return {"form": 2,
            "adjoint_variant": cert.adjoint_variant,
            "probe": _vector_json(cert.probe),
            "frame": _matrix_json(cert.frame)}


def _witness_json(w) -> dict:
    return {"out_block": w.out_block,
            "u": _vector_json(w.u),
            "v": _vector_json(w.v),
            "reason": w.reason}


def _global_report(result, tol: float, seed: int) -> dict:
    report = {"mode": "extremal", "tol": tol, "seed": seed,
              "accepted": result.accepted}
    if result.accepted:
        cert = result.certificate
        report["blocks"] = [
            dict(_certificate_json(r.certificate),
                 out_block=r.out_block, in_block=r.in_block,
                 residual=r.residual, density=r.density)
            for r in cert.blocks]
        report["e_partition"] = list(cert.e_partition)
        report["degenerate_blocks"] = list(cert.degenerate_blocks)
        report["assignment"] = list(cert.assignment)
    else:
        report["witness"] = _witness_json(result.rejection.witness)
        report["detail"] = result.rejection.detail
    return report


def _pure_report(result, tol: float, seed: int) -> dict:
    report = {"mode": "pure", "tol": tol, "seed": seed,
              "accepted": result.accepted}
    if result.accepted:
        report["blocks"] = [
            {"out_block": b.out_block, "in_block": b.in_block,
             "transposed": b.transposed,
             "isometry": _matrix_json(b.isometry)}
            for b in result.certificate.blocks]
    else:
        report["reason"] = result.reason
        report["detail"] = result.detail
        if result.global_result.rejection is not None:
            report["witness"] = _witness_json(
                result.global_result.rejection.witness)
    return report


def _jordan_report(report, tol: float) -> dict:
    return {"mode": "jordan", "tol": tol,
            "accepted": report.is_jordan,
            "unit_is_projection": report.unit_is_projection,
            "block_labels": list(report.block_labels),
            "hom_deviations": list(report.hom_deviations),
            "anti_deviations": list(report.anti_deviations),
            "jordan_deviation": report.jordan_deviation}


def _print_report(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(dump_json(report))
        return
    lines = [f"mode: {report['mode']}",
             f"accepted: {str(report['accepted']).lower()}"]
    for key in ("reason", "detail"):
        if key in report:
            lines.append(f"{key}: {report[key]}")
    if "witness" in report:
        w = report["witness"]
        lines.append(f"witness: out_block {w['out_block']}, "
                     f"reason {w['reason']}")
    for blk in report.get("blocks", []):
        if report["mode"] == "extremal":
            form = blk["form"]
            extra = ("transposed" if blk.get("transposed")
                     else "adjoint" if blk.get("adjoint_variant") else "plain")
            lines.append(f"block {blk['out_block']} <- {blk['in_block']}: "
                         f"form {form} ({extra}), residual {blk['residual']:.3e}")
        else:
            lines.append(f"block {blk['out_block']} <- {blk['in_block']}: "
                         f"isometry, transposed={blk['transposed']}")
    if report["mode"] == "jordan":
        lines.append("labels: " + ", ".join(report["block_labels"]))
        lines.append(f"jordan deviation: {report['jordan_deviation']:.3e}")
    out.write("\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def _default_seed() -> int:
    return int(os.environ.get("EXTREMAL_SEED", "0"))


def run_classify(args) -> int:
    psi = load_superoperator(args.file)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.mode == "extremal":
        result = classify_extremal_global(psi, tol=args.tol, seed=seed)
        report = _global_report(result, args.tol, seed)
        accepted = result.accepted
    elif args.mode == "pure":
        result = classify_pure_preserving(psi, tol=args.tol, seed=seed)
        report = _pure_report(result, args.tol, seed)
        accepted = result.accepted
    else:
        jr = is_jordan_morphism(psi, tol=args.tol)
        report = _jordan_report(jr, args.tol)
        accepted = jr.is_jordan
    _print_report(report, args.format)
    return 0 if accepted else 2


def _parse_block_specs(args) -> list[tuple[str, int, int]]:
    if args.blocks:
        specs = []
        for piece in args.blocks.split(","):
            parts = piece.strip().split(":")
            if len(parts) != 3:
                raise ValueError(f"bad block spec {piece!r}, want form:k:h")
            form, k, h = parts[0], int(parts[1]), int(parts[2])
            if form not in ("1", "1t", "2", "2a"):
                raise ValueError(f"unknown form {form!r}")
            specs.append((form, k, h))
        return specs
    if args.dims is None:
        raise ValueError("need either --dims K H or --blocks")
    return [(args.form, args.dims[0], args.dims[1])]


def run_generate(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rng = np.random.default_rng(seed)
    specs = _parse_block_specs(args)
    parts = []
    for form, k, h in specs:
        if form == "1":
            psi, _ = random_form1(rng, k, h, transposed=False)
        elif form == "1t":
            psi, _ = random_form1(rng, k, h, transposed=True)
        elif form == "2":
            psi, _ = random_form2(rng, k, h, adjoint_variant=False)
        else:
            psi, _ = random_form2(rng, k, h, adjoint_variant=True)
        parts.append(psi)
    if len(parts) == 1:
        psi = parts[0]
    else:
        in_shape = BlockShape(tuple(p.in_shape.dims[0] for p in parts))
        out_shape = BlockShape(tuple(p.out_shape.dims[0] for p in parts))
        tensors = tuple(
            tuple(parts[b].tensors[0][0] if b == c else
                  np.zeros((out_shape.dims[c], out_shape.dims[c],
                            in_shape.dims[b], in_shape.dims[b]),
                           dtype=np.complex128)
                  for c in range(len(out_shape)))
            for b in range(len(in_shape)))
        psi = Superoperator(in_shape, out_shape, tensors)
    text = dump_json(superoperator_to_json(psi))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_complex_list(text: str) -> tuple[complex, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(complex(piece.strip().replace("i", "j"))
                 for piece in text.split(","))


def run_disc(args) -> int:
    if args.psi_poly:
        coeffs = _parse_complex_list(args.psi_poly)

        def multiplier(z, c=coeffs):
            return np.polynomial.polynomial.polyval(z, np.asarray(c))
    else:
        multiplier = BlaschkeProduct(phase=complex(args.psi_phase.replace("i", "j")),
                                     zeros=_parse_complex_list(args.psi_zeros))
    symbol = BlaschkeProduct(phase=complex(args.phi_phase.replace("i", "j")),
                             zeros=_parse_complex_list(args.phi_zeros))
    op = DiscCompositionOp(multiplier=multiplier, symbol=symbol)
    rep = boundary_extremality_check(op, grid=args.grid, tol=args.tol)
    report = {"mode": "disc", "accepted": rep.accepted,
              "deviation": rep.deviation, "worst_t": rep.worst_t,
              "multiplier_deviation": rep.multiplier_deviation,
              "symbol_deviation": rep.symbol_deviation,
              "grid": rep.grid, "tol": rep.tol}
    if args.format == "json":
        sys.stdout.write(dump_json(report))
    else:
        sys.stdout.write(
            f"accepted: {str(rep.accepted).lower()}\n"
            f"deviation: {rep.deviation:.3e} at t = {rep.worst_t:.6f}\n")
    return 0 if rep.accepted else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extremal",
        description="Classify block-algebra maps whose adjoints preserve "
                    "extremal functionals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cls = sub.add_parser("classify", help="classify a map from a JSON file")
    p_cls.add_argument("file", help="superoperator JSON document")
    p_cls.add_argument("--mode", choices=("extremal", "pure", "jordan"),
                       default="extremal")
    p_cls.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_cls.add_argument("--seed", type=int, default=None,
                       help="witness-search seed (default: EXTREMAL_SEED or 0)")
    p_cls.add_argument("--format", choices=("json", "text"), default="json")
    p_cls.set_defaults(func=run_classify)

    p_gen = sub.add_parser("generate", help="emit a random canonical-form map")
    p_gen.add_argument("--form", choices=("1", "1t", "2", "2a"), default="1")
    p_gen.add_argument("--dims", type=int, nargs=2, metavar=("K", "H"))
    p_gen.add_argument("--blocks",
                       help="comma list form:k:h for a multi-block map, "
                            "e.g. '1:4:2,2a:9:3'")
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--out", help="output path (default: stdout)")
    p_gen.set_defaults(func=run_generate)

    p_disc = sub.add_parser("disc", help="boundary extremality of a weighted "
                                         "composition operator")
    p_disc.add_argument("--psi-zeros", default="",
                        help="comma list of multiplier zeros, e.g. '0.5,0.1+0.2j'")
    p_disc.add_argument("--psi-phase", default="1")
    p_disc.add_argument("--psi-poly", default=None,
                        help="ascending coefficients of a polynomial "
                             "multiplier (overrides the Blaschke options)")
    p_disc.add_argument("--phi-zeros", default="")
    p_disc.add_argument("--phi-phase", default="1")
    p_disc.add_argument("--grid", type=int, default=4096)
    p_disc.add_argument("--tol", type=float, default=1e-10)
    p_disc.add_argument("--format", choices=("json", "text"), default="json")
    p_disc.set_defaults(func=run_disc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    if argv is None:
        sys.exit(code)
    return code
