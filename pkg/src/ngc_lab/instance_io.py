"""Line-oriented instance files.

Grammar (UTF-8, one record per line, `#` starts a comment):

    ngc-lab v1
    param n=<int> k=<int> w=<int> d=<int> theta=<0|1|?> m=<int> form=<block|segment> t=<int> [s=<int>]
    e <u> <v> [w=<int>] [b=<int>]
    x <i> <bitstring>                 (block witness, one line per cross vector)
    p <i> <g1> <g2> ...               (block witness, one line per permutation)
    x <i> <i'> <bitstring>            (segment witness)
    p <i> <i'> <g1> <g2> ...

`w=` carries an edge weight, `b=` a batch id; both optional per edge.  The
`t=` and, for segments, `s=` tokens keep witnessless files reconstructible
(a padded instance's k no longer determines the gadget count).  Output is
byte-stable: identical data serializes to identical text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .distributions import NgcInstance, Witness, canon
from .gadgets import Edge

MAGIC = "ngc-lab v1"


@dataclass
class ParsedInstance:
    """Everything a file can carry; witness/theta only present if revealed."""

    n: int
    k: int
    w: int
    d: int
    theta: int | None
    m: int
    form: str
    t: int
    s: int | None
    edges: list[Edge]
    weights: dict[Edge, int] | None
    batches: tuple[tuple[Edge, Edge], ...] | None
    witness: Witness | None


def serialize_instance(instance: NgcInstance, reveal: bool = False) -> str:
    lines = [MAGIC]
    theta_tok = "?" if (not reveal or instance.theta is None) else str(instance.theta)
    param = (
        f"param n={instance.n} k={instance.k} w={instance.width}"
        f" d={instance.graph.depth} theta={theta_tok} m={instance.m}"
        f" form={instance.form} t={instance.t}"
    )
    if instance.s is not None:
        param += f" s={instance.s}"
    lines.append(param)

    batch_id: dict[Edge, int] = {}
    if instance.batches is not None:
        for b, (e1, e2) in enumerate(instance.batches):
            batch_id[canon(e1)] = b
            batch_id[canon(e2)] = b
    for u, v in instance.all_edges():
        rec = f"e {u} {v}"
        if instance.weights is not None:
            rec += f" w={instance.weights[canon((u, v))]}"
        if instance.batches is not None:
            rec += f" b={batch_id[canon((u, v))]}"
        lines.append(rec)

    if reveal:
        wit = instance.witness
        if wit.form == "block":
            for i, x in enumerate(wit.X, start=1):
                lines.append(f"x {i} {''.join(map(str, x))}")
            for i, perm in enumerate(wit.Sigma, start=1):
                lines.append(f"p {i} {' '.join(map(str, perm))}")
        else:
            for i, row in enumerate(wit.X, start=1):
                for ip, x in enumerate(row, start=1):
                    lines.append(f"x {i} {ip} {''.join(map(str, x))}")
            for i, row in enumerate(wit.Sigma, start=1):
                for ip, perm in enumerate(row, start=1):
                    lines.append(f"p {i} {ip} {' '.join(map(str, perm))}")
    return "\n".join(lines) + "\n"


def _parse_param_line(line: str) -> dict[str, str]:
    tokens = line.split()
    if tokens[0] != "param":
        raise ValueError(f"expected param line, got {line!r}")
    out = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise ValueError(f"malformed param token {tok!r}")
        key, val = tok.split("=", 1)
        out[key] = val
    return out


def parse_instance(text: str) -> ParsedInstance:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != MAGIC:
        raise ValueError(f"bad or missing magic line (expected {MAGIC!r})")
    params = _parse_param_line(lines[1])
    for key in ("n", "k", "w", "d", "m", "form", "theta", "t"):
        if key not in params:
            raise ValueError(f"param line missing {key}=")
    form = params["form"]
    if form not in ("block", "segment"):
        raise ValueError(f"unknown form {form!r}")
    theta = None if params["theta"] == "?" else int(params["theta"])
    if theta not in (None, 0, 1):
        raise ValueError(f"theta must be 0, 1 or ?, got {params['theta']!r}")

    edges: list[Edge] = []
    weights: dict[Edge, int] = {}
    batch_of: dict[int, list[Edge]] = {}
    saw_weight = saw_batch = False
    x_lines: dict[tuple[int, ...], tuple[int, ...]] = {}
    p_lines: dict[tuple[int, ...], tuple[int, ...]] = {}

    for ln in lines[2:]:
        tokens = ln.split()
        tag = tokens[0]
        if tag == "e":
            u, v = int(tokens[1]), int(tokens[2])
            edges.append((u, v))
            for tok in tokens[3:]:
                if tok.startswith("w="):
                    weights[canon((u, v))] = int(tok[2:])
                    saw_weight = True
                elif tok.startswith("b="):
                    saw_batch = True
                    batch_of.setdefault(int(tok[2:]), []).append((u, v))
                else:
                    raise ValueError(f"unknown edge annotation {tok!r}")
        elif tag == "x":
            if form == "block":
                key = (int(tokens[1]),)
                bits = tokens[2]
            else:
                key = (int(tokens[1]), int(tokens[2]))
                bits = tokens[3]
            x_lines[key] = tuple(int(c) for c in bits)
        elif tag == "p":
            if form == "block":
                key = (int(tokens[1]),)
                perm = tokens[2:]
            else:
                key = (int(tokens[1]), int(tokens[2]))
                perm = tokens[3:]
            p_lines[key] = tuple(int(c) for c in perm)
        else:
            raise ValueError(f"unknown record tag {tag!r} in line {ln!r}")

    batches = None
    if saw_batch:
        pairs = []
        for b in sorted(batch_of):
            group = batch_of[b]
            if len(group) != 2:
                raise ValueError(f"batch {b} has {len(group)} edges, expected 2")
            pairs.append((group[0], group[1]))
        batches = tuple(pairs)

    witness = None
    if x_lines or p_lines:
        if set(x_lines) != set(p_lines):
            raise ValueError("witness x/p lines do not cover the same gadgets")
        if form == "block":
            t = max(key[0] for key in x_lines)
            if set(x_lines) != {(i,) for i in range(1, t + 1)}:
                raise ValueError("block witness lines are not 1..t")
            witness = Witness(
                "block",
                tuple(x_lines[(i,)] for i in range(1, t + 1)),
                tuple(p_lines[(i,)] for i in range(1, t + 1)),
            )
        else:
            s = max(key[0] for key in x_lines)
            t = max(key[1] for key in x_lines)
            if set(x_lines) != {(i, ip) for i in range(1, s + 1) for ip in range(1, t + 1)}:
                raise ValueError("segment witness lines are not an s x t grid")
            witness = Witness(
                "segment",
                tuple(
                    tuple(x_lines[(i, ip)] for ip in range(1, t + 1))
                    for i in range(1, s + 1)
                ),
                tuple(
                    tuple(p_lines[(i, ip)] for ip in range(1, t + 1))
                    for i in range(1, s + 1)
                ),
            )

    return ParsedInstance(
        n=int(params["n"]),
        k=int(params["k"]),
        w=int(params["w"]),
        d=int(params["d"]),
        theta=theta,
        m=int(params["m"]),
        form=form,
        t=int(params["t"]),
        s=int(params["s"]) if "s" in params else None,
        edges=edges,
        weights=weights if saw_weight else None,
        batches=batches,
        witness=witness,
    )


def write_instance(path: str, instance: NgcInstance, reveal: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(instance, reveal=reveal))


def read_instance(path: str) -> ParsedInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
