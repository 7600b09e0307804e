"""Command-line front end: document I/O, result cache, report emission.

Exit status 0 on success, 1 on validation failure (with a structured
diagnostic on stdout), 2 on usage errors.  Reports are TSV or aligned
tables; figure-rendering report paths write PNGs alongside.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import __version__
from .abelian import AbelianGroupError
from .casson import (CassonError, LensSpace, dedekind_s, lambda_I_lens,
                     lens_sweep, rho_table)
from .cache import cache_from_options
from .complexes import ComplexError, homology_description
from .documents import DocumentError, content_hash, dump_document, load_document
from .equivariant import (EquivariantError, e1_page, equivariant_triple,
                          euler_char, irreducible_complex, verify_floer_iso)
from .flow import (BimoduleData, FlowCategoryData, FlowError, cm_complex,
                   induced_map, validate_bimodule, validate_flowcat)
from .ledger import (CobordismSheet, LedgerError, SignatureChamber,
                     ThreeManifoldSheet, adjacent, chamber_path, classify,
                     compose_shift, enum_reducibles_3d, enum_reducibles_4d,
                     normal_index, pseudocentral_count, shift_search,
                     validate_sigma)
from .matrices import MatrixError
from .report import aligned_table, plot_chamber_path, plot_lens_sweep, tsv
from .rings import QQ, RingError, ring_from_spec
from .strata import StrataError, StratifiedChain, blowup, gm_homology
from .strata import product as strata_product
from .strata import truncate as strata_truncate
from .suspension import (SectionData, default_sections, suspend, wallcross)

HANDLED = (AbelianGroupError, CassonError, ComplexError, DocumentError,
           EquivariantError, FlowError, LedgerError, MatrixError, RingError,
           StrataError, ValueError)


class Session:
    def __init__(self, cache):
        self.cache = cache


def emit(ctx, key_obj, producer):
    """Cache-aware text emission: identical inputs yield identical bytes."""
    cache = ctx.obj.cache
    key = content_hash(key_obj, version=__version__)
    hit = cache.get(key)
    if hit is not None:
        sys.stdout.write(hit.decode("utf-8"))
        return
    text = producer()
    cache.put(key, text.encode("utf-8"))
    sys.stdout.write(text)


def render(fmt, header, rows):
    """TSV for fmt=table, a JSON document for fmt=document."""
    if fmt == "document":
        from .report import show_value
        payload = [{h: show_value(v) for h, v in zip(header, row)} for row in rows]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    return tsv(header, rows)


FORMAT_OPTION = click.option("--format", "fmt",
                             type=click.Choice(["table", "document"]),
                             default="table", help="report format")


def run_guarded(fn):
    try:
        fn()
    except HANDLED as err:
        diagnostic = {"error": type(err).__name__, "detail": str(err)}
        sys.stdout.write(json.dumps(diagnostic, sort_keys=True) + "\n")
        raise SystemExit(1)


@click.group()
@click.option("--cache", "cache_dir", type=click.Path(), default=None,
              help="Result cache directory (overrides INSTANTON_CACHE).")
@click.option("--no-cache", is_flag=True, help="Bypass the result cache.")
@click.pass_context
def main(ctx, cache_dir, no_cache):
    """Exact machinery for equivariant instanton Floer homology."""
    ctx.obj = Session(cache_from_options(cache_dir, no_cache))


# ---- casson ------------------------------------------------------------------

@main.command()
@click.argument("p", type=int)
@click.argument("q", type=int)
@click.pass_context
def dedekind(ctx, p, q):
    """Exact Dedekind sum s(P; Q)."""
    run_guarded(lambda: emit(ctx, {"cmd": "dedekind", "p": p, "q": q},
                             lambda: str(dedekind_s(p, q)) + "\n"))


@main.command("lens-casson")
@click.argument("p", type=int, required=False)
@click.argument("q", type=int, required=False)
@click.option("--bundle", type=click.Choice(["trivial", "odd"]), default="trivial")
@click.option("--prec", type=int, default=12, help="certified decimal digits")
@click.option("--sweep", "max_p", type=int, default=None,
              help="sweep all coprime pairs with p up to MAXP")
@click.option("--per-level", is_flag=True,
              help="certify each rho invariant separately (slower)")
@click.option("--plot", "plot_path", type=click.Path(), default=None,
              help="render the residual figure to this PNG")
@FORMAT_OPTION
@click.pass_context
def lens_casson(ctx, p, q, bundle, prec, max_p, per_level, plot_path, fmt):
    """lambda_I(L(p,q)) against the exact Dedekind sum; TSV report."""
    def body():
        if max_p is None and (p is None or q is None):
            raise click.UsageError("give P Q or --sweep MAXP")
        if max_p is not None:
            rows = lens_sweep(max_p, bundle, prec, per_level=per_level)
        else:
            rows = [lambda_I_lens(LensSpace(p, q), bundle, prec,
                                  per_level=per_level or True)]
        table = [(r["p"], r["q"], r["bundle"], r["lambda_I"], r["dedekind"],
                  r["residual"], r["pass"]) for r in rows]
        key = {"cmd": "lens-casson", "p": p, "q": q, "bundle": bundle,
               "prec": prec, "sweep": max_p, "per_level": per_level,
               "format": fmt}
        emit(ctx, key, lambda: render(
            fmt, ("p", "q", "bundle", "lambda_I", "s(q;p)", "residual", "pass"),
            table))
        if plot_path:
            plot_lens_sweep(rows, plot_path)
            click.echo(f"figure written to {plot_path}", err=True)
        if not all(r["pass"] for r in rows):
            raise SystemExit(1)
    run_guarded(body)


@main.command("rho-table")
@click.argument("p", type=int)
@click.argument("q", type=int)
@click.option("--bundle", type=click.Choice(["trivial", "odd"]), default="trivial")
@click.option("--prec", type=int, default=12)
@click.pass_context
def rho_table_cmd(ctx, p, q, bundle, prec):
    """Certified rho invariants of the abelian classes of L(p,q)."""
    def body():
        entries = rho_table(LensSpace(p, q), bundle, prec)
        rows = [(e.ell, e.value, e.error_bound,
                 e.exact if e.exact is not None else "-") for e in entries]
        emit(ctx, {"cmd": "rho-table", "p": p, "q": q, "bundle": bundle,
                   "prec": prec},
             lambda: tsv(("ell", "rho", "error_bound", "exact"), rows))
    run_guarded(body)


# ---- ledger ------------------------------------------------------------------

def _load_sheet(path):
    return ThreeManifoldSheet.from_document(load_document(path))


def _load_cobordism(path):
    return CobordismSheet.from_document(load_document(path))


def _load_sigma(sheet, path):
    if path is None:
        return SignatureChamber(sheet)
    return SignatureChamber.from_document(sheet, load_document(path))


@main.command()
@click.argument("y_doc", type=click.Path())
@FORMAT_OPTION
@click.pass_context
def enum3d(ctx, y_doc, fmt):
    """Reducible flat connections of a rational homology sphere sheet."""
    def body():
        sheet = _load_sheet(y_doc)
        centrals, abelians = enum_reducibles_3d(sheet)
        rows = [("central", c, "-") for c in centrals]
        rows += [("abelian", z1, z2) for z1, z2 in abelians]
        rows.append(("counts", len(centrals), len(abelians)))
        emit(ctx, {"cmd": "enum3d", "doc": load_document(y_doc), "format": fmt},
             lambda: render(fmt, ("kind", "class", "partner"), rows))
    run_guarded(body)


@main.command()
@click.argument("w_doc", type=click.Path())
@click.option("--bound", type=int, default=None)
@FORMAT_OPTION
@click.pass_context
def enum4d(ctx, w_doc, bound, fmt):
    """Reducible records on a cobordism sheet."""
    def body():
        W = _load_cobordism(w_doc)
        records, saturated = enum_reducibles_4d(W, bound)
        rows = [(i, r.kind, r.x, r.y, r.energy,
                 "central" if r.source_central else "abelian",
                 "central" if r.target_central else "abelian",
                 "yes" if r.pseudocentral else "no")
                for i, r in enumerate(records)]
        header = ("index", "kind", "x", "y", "energy", "source-end",
                  "target-end", "pseudocentral")
        text = render(fmt, header, rows)
        if saturated and fmt == "table":
            text += "# search bound saturated\n"
        emit(ctx, {"cmd": "enum4d", "doc": load_document(w_doc), "bound": bound,
                   "format": fmt},
             lambda: text)
    run_guarded(body)


@main.command("normal-index")
@click.argument("w_doc", type=click.Path())
@click.option("--record", "record_index", type=int, required=True)
@click.option("--sigma", "sigma_doc", type=click.Path(), default=None)
@click.option("--sigma-out", "sigma_out_doc", type=click.Path(), default=None)
@click.option("--bound", type=int, default=None)
@click.pass_context
def normal_index_cmd(ctx, w_doc, record_index, sigma_doc, sigma_out_doc, bound):
    """Normal index of an abelian record under the given chambers."""
    def body():
        W = _load_cobordism(w_doc)
        records, _ = enum_reducibles_4d(W, bound)
        if not (0 <= record_index < len(records)):
            raise LedgerError(f"record index {record_index} out of range")
        rec = records[record_index]
        s0 = _load_sigma(W.source, sigma_doc)
        s1 = _load_sigma(W.target, sigma_out_doc)
        n = normal_index(rec, W, s0, s1)
        emit(ctx, {"cmd": "normal-index", "doc": load_document(w_doc),
                   "record": record_index,
                   "sigma": s0.to_document(), "sigma_out": s1.to_document()},
             lambda: tsv(("record", "kind", "normal_index"),
                         [(rec.label(), rec.kind, n)]))
    run_guarded(body)


@main.command("classify")
@click.argument("w_doc", type=click.Path())
@click.option("--sigma", "sigma_doc", type=click.Path(), default=None)
@click.option("--sigma-out", "sigma_out_doc", type=click.Path(), default=None)
@click.option("--bound", type=int, default=None)
@FORMAT_OPTION
@click.pass_context
def classify_cmd(ctx, w_doc, sigma_doc, sigma_out_doc, bound, fmt):
    """Obstruction taxonomy of a cobordism sheet."""
    def body():
        W = _load_cobordism(w_doc)
        records, _ = enum_reducibles_4d(W, bound)
        s0 = _load_sigma(W.source, sigma_doc)
        s1 = _load_sigma(W.target, sigma_out_doc)
        level, labels = classify(W, s0, s1, records)
        rows = [(k, v) for k, v in sorted(labels.items())]
        rows.append(("cobordism", level))
        emit(ctx, {"cmd": "classify", "doc": load_document(w_doc),
                   "sigma": s0.to_document(), "sigma_out": s1.to_document(),
                   "bound": bound, "format": fmt},
             lambda: render(fmt, ("record", "label"), rows))
    run_guarded(body)


@main.command("shift-search")
@click.argument("w_doc", type=click.Path())
@click.option("--sigma", "sigma_doc", type=click.Path(), default=None)
@click.option("--sigma-out", "sigma_out_doc", type=click.Path(), default=None)
@click.option("--bound", type=int, default=None)
@click.pass_context
def shift_search_cmd(ctx, w_doc, sigma_doc, sigma_out_doc, bound):
    """Even chamber shifts certifying pseudo-unobstructedness."""
    def body():
        W = _load_cobordism(w_doc)
        records, _ = enum_reducibles_4d(W, bound)
        s0 = _load_sigma(W.source, sigma_doc)
        s1 = _load_sigma(W.target, sigma_out_doc)
        f, fp, n, (level, _) = shift_search(W, records, s0, s1)
        emit(ctx, {"cmd": "shift-search", "doc": load_document(w_doc),
                   "sigma": s0.to_document(), "sigma_out": s1.to_document(),
                   "bound": bound},
             lambda: tsv(("n", "f", "f_out", "classification"),
                         [(n, -4 * n, 4 * n, level)]))
        if level not in ("unobstructed", "pseudo-unobstructed"):
            raise SystemExit(1)
    run_guarded(body)


@main.command("compose-shift")
@click.argument("w1_doc", type=click.Path())
@click.argument("w2_doc", type=click.Path())
@click.option("--sigma0", type=click.Path(), default=None)
@click.option("--sigma1", type=click.Path(), default=None)
@click.option("--sigma2", type=click.Path(), default=None)
@click.option("--hypothesis", type=click.Choice(["proof", "statement"]),
              default="proof")
@click.option("--bound", type=int, default=None)
@click.pass_context
def compose_shift_cmd(ctx, w1_doc, w2_doc, sigma0, sigma1, sigma2, hypothesis,
                      bound):
    """Composite-shift feasibility with the +-2 split at the middle."""
    def body():
        W1 = _load_cobordism(w1_doc)
        W2 = _load_cobordism(w2_doc)
        r1, _ = enum_reducibles_4d(W1, bound)
        r2, _ = enum_reducibles_4d(W2, bound)
        s0 = _load_sigma(W1.source, sigma0)
        s1 = _load_sigma(W1.target, sigma1)
        s2 = _load_sigma(W2.target, sigma2)
        out = compose_shift(W1, W2, r1, r2, s0, s1, s2, hypothesis=hypothesis)
        rows = [("f0", out["f0"]), ("f2", out["f2"]),
                ("levels", "/".join(out["levels"])),
                ("split_ok", out["split_ok"])]
        for key, value in sorted(out["f1"].items()):
            rows.append((f"f1{key}", value))
        for key, lab1, lab2, total, ok in out["certificates"]:
            rows.append((f"certificate{key}", f"{lab1}+{lab2}={total}:{ok}"))
        emit(ctx, {"cmd": "compose-shift", "w1": load_document(w1_doc),
                   "w2": load_document(w2_doc), "s0": s0.to_document(),
                   "s1": s1.to_document(), "s2": s2.to_document(),
                   "hypothesis": hypothesis},
             lambda: tsv(("field", "value"), rows))
    run_guarded(body)


@main.command("pseudocount")
@click.argument("w_doc", type=click.Path())
@click.option("--theta", default="", help="central class on the source, comma-separated")
@click.option("--theta-out", default="", help="central class on the target")
@click.pass_context
def pseudocount_cmd(ctx, w_doc, theta, theta_out):
    """|Z-tilde| = |Z| + 2|P| for central classes on the two ends."""
    def body():
        W = _load_cobordism(w_doc)

        def parse(s):
            return tuple(int(c) for c in s.split(",")) if s else ()

        out = pseudocentral_count(W, parse(theta), parse(theta_out))
        emit(ctx, {"cmd": "pseudocount", "doc": load_document(w_doc),
                   "theta": theta, "theta_out": theta_out},
             lambda: tsv(("z_tilde", "central", "pseudocentral", "identity"),
                         [(out["z_tilde"], out["central"], out["pseudocentral"],
                           out["identity_holds"])]))
        if not out["identity_holds"]:
            raise SystemExit(1)
    run_guarded(body)


# ---- flow --------------------------------------------------------------------

@main.group()
def flow():
    """Flow categories: validation, homology, suspension, wall-crossing."""


def _load_fc(path):
    return FlowCategoryData.from_document(load_document(path))


def _load_sections(fc, rho, sections_doc, use_default):
    if sections_doc is not None:
        return SectionData.from_document(load_document(sections_doc))
    if use_default:
        return default_sections(fc, rho)
    return None


@flow.command("validate")
@click.argument("fc_doc", type=click.Path())
@click.pass_context
def flow_validate(ctx, fc_doc):
    def body():
        fc = _load_fc(fc_doc)
        report = validate_flowcat(fc)
        rows = [("valid", report.ok)]
        for axiom, witness, detail in report.failures:
            rows.append((axiom, f"{witness}: {detail}"))
        emit(ctx, {"cmd": "flow-validate", "doc": load_document(fc_doc)},
             lambda: tsv(("check", "result"), rows))
        if not report.ok:
            raise SystemExit(1)
    run_guarded(body)


@flow.command("homology")
@click.argument("fc_doc", type=click.Path())
@click.option("--coeff", default="q", help="coefficients: q, z, or fp:P")
@FORMAT_OPTION
@click.pass_context
def flow_homology(ctx, fc_doc, coeff, fmt):
    def body():
        fc = _load_fc(fc_doc)
        ring = ring_from_spec(coeff)
        eq = cm_complex(fc, ring)
        rows = homology_description(ring, eq.homology())
        emit(ctx, {"cmd": "flow-homology", "doc": load_document(fc_doc),
                   "coeff": coeff, "format": fmt},
             lambda: render(fmt, ("grading", "homology"), rows))
    run_guarded(body)


@flow.command("equivariant")
@click.argument("fc_doc", type=click.Path())
@click.option("--coeff", default="q")
@click.option("--plot", "plot_path", type=click.Path(), default=None,
              help="render the degreewise rank figure to this PNG")
@FORMAT_OPTION
@click.pass_context
def flow_equivariant(ctx, fc_doc, coeff, plot_path, fmt):
    def body():
        from .rings import PolynomialRing
        fc = _load_fc(fc_doc)
        ring = ring_from_spec(coeff)
        eq = cm_complex(fc, ring)
        triple = equivariant_triple(eq)
        polyring = PolynomialRing(ring, var_degree=-4)
        towers = [polyring.show(f) for f in triple.minus_module[1]]
        rows = [("I_minus_free_rank", triple.minus_module[0]),
                ("I_minus_towers", "; ".join(towers) if towers else "-"),
                ("I_infty_zero", triple.infty_is_zero()),
                ("triangle_exact", triple.exact)]
        for j in sorted(triple.degreewise, reverse=True):
            rm, ri, rp = triple.degreewise[j]
            if rm or ri or rp:
                rows.append((f"degree {j}", f"I-={rm} Iinf={ri} I+={rp}"))
        emit(ctx, {"cmd": "flow-equivariant", "doc": load_document(fc_doc),
                   "coeff": coeff, "format": fmt},
             lambda: render(fmt, ("field", "value"), rows))
        if plot_path:
            from .report import plot_triangle_ranks
            plot_triangle_ranks(triple.degreewise, plot_path)
            click.echo(f"figure written to {plot_path}", err=True)
        if not triple.exact:
            raise SystemExit(1)
    run_guarded(body)


@flow.command("irreducible")
@click.argument("fc_doc", type=click.Path())
@click.option("--coeff", default="z")
@click.pass_context
def flow_irreducible(ctx, fc_doc, coeff):
    def body():
        fc = _load_fc(fc_doc)
        ring = ring_from_spec(coeff)
        complex_ = irreducible_complex(fc, ring)
        eq = cm_complex(fc, ring if ring is not None else QQ)
        ok, witness = verify_floer_iso(eq, fc)
        rows = homology_description(ring, complex_.homology())
        rows.append(("floer_iso", "pass" if ok else f"FAIL at {witness}"))
        rows.append(("euler", euler_char(complex_.homology())))
        emit(ctx, {"cmd": "flow-irreducible", "doc": load_document(fc_doc),
                   "coeff": coeff},
             lambda: tsv(("grading", "value"), rows))
        if not ok:
            raise SystemExit(1)
    run_guarded(body)


@flow.command("suspend")
@click.argument("fc_doc", type=click.Path())
@click.option("--rho", required=True)
@click.option("--sections", "sections_doc", type=click.Path(), default=None)
@click.option("--default", "use_default", is_flag=True)
@click.option("--out", "out_doc", type=click.Path(), default=None)
@click.pass_context
def flow_suspend(ctx, fc_doc, rho, sections_doc, use_default, out_doc):
    def body():
        fc = _load_fc(fc_doc)
        sections = _load_sections(fc, rho, sections_doc, use_default or True)
        susp = suspend(fc, rho, sections)
        text = dump_document(susp.to_document(), out_doc)
        if out_doc:
            click.echo(f"suspension written to {out_doc}")
        else:
            sys.stdout.write(text)
    run_guarded(body)


@flow.command("wallcross")
@click.argument("fc_doc", type=click.Path())
@click.option("--rho", required=True)
@click.option("--sections", "sections_doc", type=click.Path(), default=None)
@click.option("--default", "use_default", is_flag=True, default=True)
@click.option("--coeff", default="z")
@FORMAT_OPTION
@click.pass_context
def flow_wallcross(ctx, fc_doc, rho, sections_doc, use_default, coeff, fmt):
    def body():
        fc = _load_fc(fc_doc)
        ring = ring_from_spec(coeff)
        sections = _load_sections(fc, rho, sections_doc, use_default)
        report = wallcross(fc, rho, sections, ring)
        doc = report.to_document()
        rows = [("rho", rho), ("grading", doc["grading"]),
                ("V2", json.dumps(doc["V2"], sort_keys=True)),
                ("triangle_exact", report.triangle_exact),
                ("chi_before", report.chi0), ("chi_after", report.chi1),
                ("chi_drop", report.chi_drop)]
        emit(ctx, {"cmd": "flow-wallcross", "doc": load_document(fc_doc),
                   "rho": rho, "coeff": coeff, "format": fmt},
             lambda: render(fmt, ("field", "value"), rows))
        if not report.triangle_exact or report.chi_drop != 1:
            raise SystemExit(1)
    run_guarded(body)


@flow.command("bimodule")
@click.argument("m_doc", type=click.Path())
@click.option("--check/--apply", "check_only", default=True)
@click.option("--coeff", default="q")
@click.pass_context
def flow_bimodule(ctx, m_doc, check_only, coeff):
    def body():
        bm = BimoduleData.from_document(load_document(m_doc))
        report = validate_bimodule(bm)
        rows = [("valid", report.ok)]
        for axiom, witness, detail in report.failures:
            rows.append((axiom, f"{witness}: {detail}"))
        if not check_only and report.ok:
            ring = ring_from_spec(coeff)
            phi = induced_map(bm, ring)
            rows.append(("chain_map", phi.commutes_with_d()))
            rows.append(("quasi_iso", phi.is_quasi_iso()))
        emit(ctx, {"cmd": "flow-bimodule", "doc": load_document(m_doc),
                   "check": check_only, "coeff": coeff},
             lambda: tsv(("check", "result"), rows))
        if not report.ok:
            raise SystemExit(1)
    run_guarded(body)


# ---- strata ------------------------------------------------------------------

@main.group()
def strata():
    """Stratified chains: validation, boundary calculus, homology."""


@strata.command("validate")
@click.argument("x_doc", type=click.Path())
@click.option("--cubical", is_flag=True)
@click.pass_context
def strata_validate(ctx, x_doc, cubical):
    def body():
        chain = StratifiedChain.from_document(load_document(x_doc))
        report = chain.validate(cubical=cubical)
        rows = [("valid", report.ok)]
        for f in report.failures:
            rows.append((f.axiom, f"{f.witness}: {f.detail}"))
        emit(ctx, {"cmd": "strata-validate", "doc": load_document(x_doc),
                   "cubical": cubical},
             lambda: tsv(("check", "result"), rows))
        if not report.ok:
            raise SystemExit(1)
    run_guarded(body)


@strata.command("boundary")
@click.argument("x_doc", type=click.Path())
@click.pass_context
def strata_boundary(ctx, x_doc):
    def body():
        chain = StratifiedChain.from_document(load_document(x_doc))
        element = chain.boundary()
        rows = sorted(element.coefficients.items())
        rows.append(("d_squared_zero", "yes" if chain.boundary_square_is_zero()
                     else "no"))
        emit(ctx, {"cmd": "strata-boundary", "doc": load_document(x_doc)},
             lambda: tsv(("face", "coefficient"), rows))
    run_guarded(body)


@strata.command("product")
@click.argument("x_doc", type=click.Path())
@click.argument("y_doc", type=click.Path())
@click.option("--out", "out_doc", type=click.Path(), default=None)
@click.pass_context
def strata_product_cmd(ctx, x_doc, y_doc, out_doc):
    def body():
        X = StratifiedChain.from_document(load_document(x_doc))
        Y = StratifiedChain.from_document(load_document(y_doc))
        P = strata_product(X, Y)
        text = dump_document(P.to_document(), out_doc)
        if out_doc:
            click.echo(f"product written to {out_doc}")
        else:
            sys.stdout.write(text)
    run_guarded(body)


@strata.command("truncate")
@click.argument("x_doc", type=click.Path())
@click.option("--cuts", "cuts_doc", type=click.Path(), required=True,
              help='document with {"cuts": {face: new}, "removed": [...]}')
@click.option("--out", "out_doc", type=click.Path(), default=None)
@click.pass_context
def strata_truncate_cmd(ctx, x_doc, cuts_doc, out_doc):
    def body():
        X = StratifiedChain.from_document(load_document(x_doc))
        spec = load_document(cuts_doc)
        T = strata_truncate(X, spec.get("cuts", {}), spec.get("removed", ()))
        text = dump_document(T.to_document(), out_doc)
        if out_doc:
            click.echo(f"truncation written to {out_doc}")
        else:
            sys.stdout.write(text)
    run_guarded(body)


@strata.command("blowup")
@click.argument("x_doc", type=click.Path())
@click.option("--locus", "locus_doc", type=click.Path(), required=True,
              help='document with the zero-locus chain, "hosts" and "codim"')
@click.option("--out", "out_doc", type=click.Path(), default=None)
@click.pass_context
def strata_blowup_cmd(ctx, x_doc, locus_doc, out_doc):
    def body():
        X = StratifiedChain.from_document(load_document(x_doc))
        spec = load_document(locus_doc)
        Z = StratifiedChain.from_document(spec["locus"])
        B = blowup(X, Z, spec["codim"], spec["hosts"])
        text = dump_document(B.to_document(), out_doc)
        if out_doc:
            click.echo(f"blowup written to {out_doc}")
        else:
            sys.stdout.write(text)
    run_guarded(body)


@strata.command("homology")
@click.argument("x_docs", type=click.Path(), nargs=-1, required=True)
@click.option("--ambient", type=int, required=True)
@click.option("--coeff", default="z")
@click.pass_context
def strata_homology_cmd(ctx, x_docs, ambient, coeff):
    def body():
        chains = [StratifiedChain.from_document(load_document(p)) for p in x_docs]
        ring = ring_from_spec(coeff)
        hom = gm_homology(chains, ambient, ring)
        rows = homology_description(ring, hom)
        emit(ctx, {"cmd": "strata-homology",
                   "docs": [load_document(p) for p in x_docs],
                   "ambient": ambient, "coeff": coeff},
             lambda: tsv(("degree", "homology"), rows))
    run_guarded(body)


# ---- chambers ------------------------------------------------------------------

@main.group()
def chamber():
    """Signature-data chambers: validation, adjacency, paths."""


@chamber.command("path")
@click.argument("s0_doc", type=click.Path())
@click.argument("s1_doc", type=click.Path())
@click.option("--sheet", "sheet_doc", type=click.Path(), required=True)
@click.option("--plot", "plot_path", type=click.Path(), default=None)
@click.pass_context
def chamber_path_cmd(ctx, s0_doc, s1_doc, sheet_doc, plot_path):
    """Monotone adjacent-chamber path through the pointwise maximum."""
    def body():
        sheet = _load_sheet(sheet_doc)
        s0 = SignatureChamber.from_document(sheet, load_document(s0_doc))
        s1 = SignatureChamber.from_document(sheet, load_document(s1_doc))
        for sigma in (s0, s1):
            failures = validate_sigma(sheet, sigma)
            if failures:
                raise LedgerError(f"mod4-violation: {failures[0]}")
        steps = chamber_path(s0, s1)
        rows = [(i, direction, rho,
                 json.dumps(chamber.to_document(), sort_keys=True))
                for i, (direction, rho, chamber) in enumerate(steps)]
        emit(ctx, {"cmd": "chamber-path", "sheet": load_document(sheet_doc),
                   "s0": load_document(s0_doc), "s1": load_document(s1_doc)},
             lambda: tsv(("step", "direction", "rho", "sigma"), rows))
        if plot_path:
            plot_chamber_path(steps, s0, plot_path)
            click.echo(f"figure written to {plot_path}", err=True)
    run_guarded(body)


@chamber.command("adjacent")
@click.argument("s0_doc", type=click.Path())
@click.argument("s1_doc", type=click.Path())
@click.option("--sheet", "sheet_doc", type=click.Path(), required=True)
@click.pass_context
def chamber_adjacent_cmd(ctx, s0_doc, s1_doc, sheet_doc):
    def body():
        sheet = _load_sheet(sheet_doc)
        s0 = SignatureChamber.from_document(sheet, load_document(s0_doc))
        s1 = SignatureChamber.from_document(sheet, load_document(s1_doc))
        ok, rho = adjacent(s0, s1)
        emit(ctx, {"cmd": "chamber-adjacent", "sheet": load_document(sheet_doc),
                   "s0": load_document(s0_doc), "s1": load_document(s1_doc)},
             lambda: tsv(("adjacent", "rho"), [(ok, rho if rho else "-")]))
    run_guarded(body)


if __name__ == "__main__":
    main()
