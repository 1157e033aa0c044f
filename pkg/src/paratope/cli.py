"""Command-line interface: exact lattice/Voronoi/zonotope reports as JSON.

File formats (all rationals are strings "p/q" or integers, never floats):
  lattice file:    {"name": str, "dim": int, "gram": [[q, ...], ...]}
  vector-set file: {"basis": "primal"|"dual", "vectors": [[q, ...], ...]}
Built-in lattice names (Z1..Z10, A1..A8, D3..D8, E6, E6*, E7, E7*, E8) are
accepted wherever a lattice file is expected.
"""

from __future__ import annotations

import json
import sys

import click

from .exact import QQ, fmt_q, inverse, matvec, qq, qvec
from .lattices import (Lattice, builtin_lattice, coset_minima,
                       relevant_vectors)
from .voronoi import belts, build_voronoi
from .freedom import NotFree, free_lines
from .zonosum import (NotFinitelyFree, enumerate_feasible, freedom_report,
                      venkov_check)


class InputError(click.ClickException):
    exit_code = 1


def _jq(x):
    """JSON-encode one rational: int when integral, else "p/q"."""
    x = qq(x)
    return int(x) if x.denominator == 1 else fmt_q(x)


def _jvec(v):
    return [_jq(x) for x in v]


def _jtree(x):
    """JSON-encode a nested structure of tuples/strings/rationals."""
    if x is None or isinstance(x, (str, bool)):
        return x
    if isinstance(x, (tuple, list)):
        return [_jtree(y) for y in x]
    return _jq(x)


def _parse_q(x, where):
    try:
        if isinstance(x, bool):
            raise ValueError
        if isinstance(x, int):
            return QQ(x)
        if isinstance(x, str):
            num, _, den = x.partition("/")
            return QQ(int(num), int(den)) if den else QQ(int(num))
    except (ValueError, ZeroDivisionError):
        pass
    raise InputError("%s: not an exact rational: %r" % (where, x))


def _load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise InputError("%s: line %d column %d: %s"
                         % (path, e.lineno, e.colno, e.msg))


def load_lattice(spec):
    """A built-in lattice name, or a lattice JSON file."""
    try:
        return builtin_lattice(spec)
    except ValueError:
        pass
    doc = _load_json(spec)
    if not isinstance(doc, dict) or "gram" not in doc:
        raise InputError("%s: expected an object with a 'gram' field" % spec)
    gram = doc["gram"]
    dim = doc.get("dim", len(gram))
    if (not isinstance(gram, list) or len(gram) != dim
            or any(not isinstance(r, list) or len(r) != dim for r in gram)):
        raise InputError("%s: field 'gram': expected a %dx%d matrix"
                         % (spec, dim, dim))
    rows = tuple(tuple(_parse_q(x, "%s: gram[%d][%d]" % (spec, i, j))
                       for j, x in enumerate(r))
                 for i, r in enumerate(gram))
    try:
        return Lattice(gram=rows, name=str(doc.get("name", spec)))
    except ValueError as e:
        raise InputError("%s: %s" % (spec, e))


def load_vectors(path, lat=None, want="dual"):
    """A vector-set file; converts between primal and dual coordinates via
    the lattice Gram matrix when needed."""
    doc = _load_json(path)
    if not isinstance(doc, dict) or "vectors" not in doc:
        raise InputError("%s: expected an object with a 'vectors' field"
                         % path)
    basis = doc.get("basis", want)
    if basis not in ("primal", "dual"):
        raise InputError("%s: field 'basis': expected 'primal' or 'dual'"
                         % path)
    if want is None:
        want = basis
    vecs = [tuple(_parse_q(x, "%s: vectors[%d][%d]" % (path, i, j))
                  for j, x in enumerate(v))
            for i, v in enumerate(doc["vectors"])]
    if len({len(v) for v in vecs}) > 1:
        raise InputError("%s: vectors of mixed dimension" % path)
    if basis != want:
        if lat is None:
            raise InputError("%s: cannot convert %s coordinates without a "
                             "lattice" % (path, basis))
        m = lat.gram if basis == "primal" else inverse(lat.gram)
        vecs = [tuple(matvec(m, v)) for v in vecs]
    return vecs


def _emit(doc):
    click.echo(json.dumps(doc, indent=1, sort_keys=True))


@click.group()
def main():
    """Exact tools for lattice Voronoi parallelotopes and zonotope sums."""


# ---------------------------------------------------------------------------
@main.group()
def lattice():
    """Lattice-level reports."""


@lattice.command("info")
@click.argument("spec")
@click.option("--jobs", default=1, show_default=True)
def lattice_info(spec, jobs):
    lat = load_lattice(spec)
    from .exact import det
    cosets = coset_minima(lat, jobs=jobs)
    rel = relevant_vectors(lat, cosets)
    _emit({
        "name": lat.name,
        "dim": lat.dim,
        "det": _jq(det(lat.gram)),
        "min_norm": _jq(min(lat.norm(z) for z in rel)),
        "relevant_count": len(rel),
        "cosets": [{"rep": list(c.rep), "norm": _jq(c.min_norm),
                    "count": len(c.minima), "simple": c.simple}
                   for c in cosets],
    })


# ---------------------------------------------------------------------------
@main.group()
def voronoi():
    """Voronoi polytope reports."""


@voronoi.command("build")
@click.argument("spec")
def voronoi_build(spec):
    P = build_voronoi(load_lattice(spec))
    _emit({
        "dim": P.dim,
        "facet_count": len(P.facet_normals),
        "vertex_count": len(P.vertices),
        "facets": [{"normal": list(z), "rhs": _jq(r)}
                   for z, r in zip(P.facet_normals, P.facet_rhs)],
        "vertices": [_jvec(v) for v in P.vertices],
    })


@voronoi.command("belts")
@click.argument("spec")
def voronoi_belts(spec):
    P = build_voronoi(load_lattice(spec))
    bs = belts(P)
    _emit({
        "belt_count": len(bs),
        "lengths": sorted(b.length for b in bs),
        "belts": [{"length": b.length,
                   "normal_lines": [list(l) for l in b.normal_lines(P)]}
                  for b in bs],
    })


@voronoi.command("faces")
@click.argument("spec")
@click.option("--min-dim", default=0, show_default=True)
def voronoi_faces(spec, min_dim):
    P = build_voronoi(load_lattice(spec))
    by_dim = P.faces(min_dim)
    _emit({"counts": {str(d): len(v) for d, v in sorted(by_dim.items())}})


# ---------------------------------------------------------------------------
@main.group()
def free():
    """Free directions of the Voronoi polytope."""


@free.command("enumerate")
@click.argument("spec")
def free_enumerate(spec):
    P = build_voronoi(load_lattice(spec))
    res = free_lines(P)
    _emit({
        "finitely_free": res.finitely_free,
        "lines": [_jvec(l) for l in res.lines],
        "residual_dims": sorted(s.dim for s in res.residual_subspaces),
    })


# ---------------------------------------------------------------------------
@main.group()
def zonosum():
    """Minkowski sums of the Voronoi polytope with zonotopes."""


@zonosum.command("check")
@click.argument("spec")
@click.option("--generators", "gen_path", required=True,
              help="vector-set file of segment generators")
def zonosum_check(spec, gen_path):
    """Exit code 0: the sum is a parallelotope; 2: it is not; 1: error."""
    lat = load_lattice(spec)
    P = build_voronoi(lat)
    U = load_vectors(gen_path, lat, want="dual")
    report = venkov_check(P, U)
    _emit({
        "is_parallelotope": report.is_parallelotope,
        "facet_count": report.facet_count,
        "belt_histogram": {str(k): v for k, v in
                           sorted(report.belt_histogram.items())},
        "witness": _jtree(report.witness),
    })
    if not report.is_parallelotope:
        sys.exit(2)


def _orbit_doc(o):
    return {"rep": list(o.rep), "size": o.size, "dim": o.dim,
            "orbit_size": o.orbit_size,
            "stabilizer_order": o.stabilizer_order}


@zonosum.command("enumerate")
@click.argument("spec")
@click.option("--max-size", default=None, type=int)
@click.option("--jobs", default=1, show_default=True)
@click.option("--generators", "gen_path", default=None,
              help="vector-set file; defaults to the free lines of the sum")
def zonosum_enumerate(spec, max_size, jobs, gen_path):
    lat = load_lattice(spec)
    P = build_voronoi(lat)
    if gen_path is not None:
        gens = load_vectors(gen_path, lat, want="dual")
    else:
        gens = free_lines(P).lines
    try:
        res = enumerate_feasible(P, gens, max_size=max_size, jobs=jobs)
    except (NotFinitelyFree, ValueError) as e:
        raise InputError(str(e))
    _emit({
        "group_order": res["group_order"],
        "minimal_forbidden_orbits":
            [_orbit_doc(o) for o in res["minimal_forbidden_orbits"]],
        "maximal_feasible_orbits":
            [_orbit_doc(o) for o in res["maximal_feasible_orbits"]],
    })


# ---------------------------------------------------------------------------
@main.group()
def e6():
    """Reports specific to the E6 lattice."""


@e6.command("tables")
@click.option("--enumeration", "enum_path", default=None,
              help="JSON file with a saved feasibility enumeration "
                   "(as written by --save-enumeration)")
@click.option("--save-enumeration", "save_path", default=None)
@click.option("--jobs", default=1, show_default=True)
def e6_tables(enum_path, save_path, jobs):
    """Check the face-count, maximal-system, and summary tables against the
    shipped golden data; nonzero exit on any mismatch."""
    from . import e6 as e6mod
    from .zonosum import OrbitInfo
    model = e6mod.e6_model()
    P = e6mod.e6_voronoi()
    gold = e6mod.golden_data()
    mismatches = []

    sr = e6mod.schlafli_report(P)
    counts = [sr.counts[d] for d in range(6)]
    t1 = {"counts": counts + [1], "dim5_split": list(sr.dim5_split),
          "dim4_split": list(sr.dim4_split)}
    if t1 != gold["table1"]:
        mismatches.append("face-count table: %r != %r" % (t1, gold["table1"]))

    if enum_path is not None:
        doc = _load_json(enum_path)
        enumeration = {
            k: [OrbitInfo(rep=tuple(o["rep"]), size=o["size"], dim=o["dim"],
                          orbit_size=o["orbit_size"],
                          stabilizer_order=o["stabilizer_order"])
                for o in doc[k]]
            for k in ("minimal_forbidden_orbits", "maximal_feasible_orbits")}
        enumeration["group_order"] = doc["group_order"]
    else:
        enumeration = e6mod.run_enumeration(P, model, jobs=jobs)
    if save_path is not None:
        with open(save_path, "w") as f:
            json.dump({
                "group_order": enumeration["group_order"],
                "minimal_forbidden_orbits":
                    [_orbit_doc(o)
                     for o in enumeration["minimal_forbidden_orbits"]],
                "maximal_feasible_orbits":
                    [_orbit_doc(o)
                     for o in enumeration["maximal_feasible_orbits"]],
            }, f, indent=1)

    rows, mm = e6mod.reproduce_table2(enumeration, model, P)
    mismatches += mm

    row3 = freedom_report(P, generators=model.duals,
                          enumeration=enumeration)
    summary = {"free_count": row3.free_count,
               "min_forbidden_orbits": row3.min_forbidden_orbits,
               "max_feasible_orbits": row3.max_feasible_orbits,
               "dim_max": row3.dim_max, "size_max": row3.size_max}
    if summary != gold["table3_row"]:
        mismatches.append("summary row: %r != %r"
                          % (summary, gold["table3_row"]))

    click.echo("face counts by dim: %s  (facets %d+%d, 4-faces %d+%d)"
               % (t1["counts"], *t1["dim5_split"], *t1["dim4_split"]))
    click.echo("%-3s %-4s %-4s %-6s %-7s %s"
               % ("nr", "|U|", "dim", "|Stab|", "orbit", "labels"))
    for k, row in enumerate(rows):
        click.echo("%-3d %-4d %-4d %-6d %-7d %s"
                   % (k + 1, row["size"], row["dim"],
                      row["stabilizer_order"], row["orbit_size"],
                      " ".join(row["labels"])))
    click.echo("summary: %s" % json.dumps(summary, sort_keys=True))
    for m in mismatches:
        click.echo("MISMATCH: %s" % m, err=True)
    if mismatches:
        sys.exit(3)


# ---------------------------------------------------------------------------
@main.group()
def matroid():
    """Matroid reports for integer vector systems."""


@matroid.command("classify")
@click.argument("vsfile")
def matroid_classify(vsfile):
    from . import matroid as mt
    vecs = load_vectors(vsfile, want=None)
    ints = []
    for v in vecs:
        den = 1
        for x in v:
            den = den * x.denominator // __import__("math").gcd(
                den, x.denominator)
        ints.append(tuple(int(x * den) for x in v))
    try:
        sys_ = mt.UnimodularSystem(tuple(ints))
    except ValueError as e:
        raise InputError("%s: %s" % (vsfile, e))
    circs = mt.circuits(sys_)
    _emit({
        "size": sys_.size,
        "rank": sys_.rank,
        "circuit_count": len(circs),
        "circuits": [list(c) for c in circs],
        "unimodular": mt.is_unimodular(sys_),
        "label": mt.classify(sys_),
    })


# ---------------------------------------------------------------------------
@main.group()
def symmetry():
    """Symmetry reports for vector configurations."""


@symmetry.command("orbits")
@click.argument("vsfile")
@click.option("--subsets", "subsets_path", required=True,
              help="JSON file: a list of index lists")
@click.option("--lattice", "lat_spec", default=None,
              help="lattice whose metric the configuration lives in")
def symmetry_orbits(vsfile, subsets_path, lat_spec):
    from .exact import identity
    from .symmetry import gram_automorphisms
    lat = load_lattice(lat_spec) if lat_spec else None
    vecs = load_vectors(vsfile, lat, want="dual" if lat else None)
    doc = _load_json(subsets_path)
    if not isinstance(doc, list):
        raise InputError("%s: expected a list of index lists" % subsets_path)
    subsets = []
    for i, s in enumerate(doc):
        if (not isinstance(s, list)
                or any(not isinstance(x, int) or not 0 <= x < len(vecs)
                       for x in s)):
            raise InputError("%s: entry %d: expected indices into the "
                             "vector set" % (subsets_path, i))
        subsets.append(tuple(sorted(s)))
    gram = inverse(lat.gram) if lat else identity(len(vecs[0]))
    group = gram_automorphisms(vecs, gram)
    out = []
    for s in subsets:
        canon, _ = group.min_image(s)
        osize = len(group.subset_orbit(s))
        out.append({"subset": list(s), "canonical": list(canon),
                    "orbit_size": osize,
                    "stabilizer_order": group.order // osize})
    _emit({"group_order": group.order, "orbits": out})


if __name__ == "__main__":
    main()
