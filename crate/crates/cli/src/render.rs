//! Human-readable rendering of reports.

use std::fmt::Write;

use wedgekit::rational::format_rational;
use wedgekit::{ExactMatrix, ObstructionVerdict, Rational, Witness};

use crate::reports::*;

fn vec_text(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn list<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn matrix(out: &mut String, name: &str, m: &ExactMatrix) {
    writeln!(out, "{name}:").unwrap();
    for line in m.to_string().lines() {
        writeln!(out, "  {line}").unwrap();
    }
}

fn matrices(out: &mut String, m: &ExactMatrix, inv: Option<&ExactMatrix>) {
    matrix(out, "M", m);
    match inv {
        Some(i) => matrix(out, "M^-1", i),
        None => writeln!(out, "M^-1: singular").unwrap(),
    }
}

fn verdict(out: &mut String, v: &ObstructionVerdict) {
    writeln!(out, "verdict: {}", v.status()).unwrap();
    match v.witness() {
        None => {}
        Some(Witness::Curvette {
            curvette,
            ord_e,
            ord_f,
            polynomial,
        }) => {
            write!(
                out,
                "witness: curvette through p_{curvette}, ord_E = {}, ord_F = {}",
                format_rational(ord_e),
                format_rational(ord_f)
            )
            .unwrap();
            if let Some(p) = polynomial {
                write!(out, ", equation {p}").unwrap();
            }
            out.push('\n');
        }
        Some(Witness::Polynomial {
            polynomial,
            ord_e,
            ord_f,
            ord_f2,
        }) => {
            writeln!(out, "witness: g = {polynomial}, {ord_e} < {ord_f} + {ord_f2}").unwrap();
        }
        Some(Witness::Solution {
            a,
            negative,
            non_integral,
            zero_special,
        }) => {
            writeln!(out, "witness: a = {}", vec_text(a)).unwrap();
            if !negative.is_empty() {
                writeln!(out, "  negative entries at {}", list(negative)).unwrap();
            }
            if !non_integral.is_empty() {
                writeln!(out, "  non-integral entries at {}", list(non_integral)).unwrap();
            }
            if *zero_special {
                writeln!(out, "  zero coefficient on the special component").unwrap();
            }
        }
    }
}

pub fn text(report: &Report) -> String {
    let mut out = String::new();
    let o = &mut out;
    match report {
        Report::Graph(r) => {
            writeln!(o, "graph {} ({} vertices)", r.source, r.vertex_ids.len()).unwrap();
            writeln!(o, "negative definite: {}", r.negative_definite).unwrap();
            writeln!(o, "det: {}", format_rational(&r.determinant)).unwrap();
            writeln!(o, "leading minors: {}", vec_text(&r.leading_minors)).unwrap();
            if let (Some(np), Some(neg)) = (r.inverse_all_nonpositive, r.inverse_all_negative) {
                let sign = if neg {
                    "all negative"
                } else if np {
                    "all non-positive, some zero"
                } else {
                    "has positive entries"
                };
                writeln!(o, "M^-1 entries: {sign}").unwrap();
            }
            for e in &r.offending_entries {
                writeln!(o, "  positive entry ({}, {}) = {}", e.row, e.col, format_rational(&e.value)).unwrap();
            }
            writeln!(o, "canonical key: {}", r.canonical_key).unwrap();
            matrices(o, &r.intersection_matrix, r.inverse.as_ref());
        }
        Report::Cluster(r) => {
            writeln!(o, "cluster {} ({} points)", r.source, r.points.len()).unwrap();
            for (i, p) in r.points.iter().enumerate() {
                let mut line = format!("  p_{i}");
                if let Some(par) = p.parent {
                    write!(line, " on F_{par}").unwrap();
                }
                if let Some(s) = p.satellite_of {
                    write!(line, " and F_{s} (satellite)").unwrap();
                }
                if let Some(t) = &p.tangent {
                    write!(line, ", tangent {t}").unwrap();
                }
                writeln!(o, "{line}").unwrap();
            }
            writeln!(o, "det: {}", format_rational(&r.determinant)).unwrap();
            writeln!(o, "canonical coefficients: {}", list(&r.canonical_coefficients)).unwrap();
            writeln!(o, "M = -P^T P: ok").unwrap();
            matrix(o, "P", &r.proximity_matrix);
            matrices(o, &r.intersection_matrix, Some(&r.inverse));
        }
        Report::Compare(r) => {
            writeln!(o, "compare nu_F{} with nu_F{} on {}: {:?}", r.e, r.f, r.source, r.comparison).unwrap();
            writeln!(o, "joint model points: {}", list(&r.joint_points)).unwrap();
            writeln!(o, "row e: {}", vec_text(&r.row_e)).unwrap();
            writeln!(o, "row f: {}", vec_text(&r.row_f)).unwrap();
            matrices(o, &r.intersection_matrix, Some(&r.inverse));
        }
        Report::Ord(r) => {
            writeln!(o, "ord_F{}({}) = {}", r.e, r.polynomial, r.ord).unwrap();
            writeln!(o, "points: {}", list(&r.points)).unwrap();
            writeln!(o, "orders: {}", list(&r.orders)).unwrap();
            writeln!(o, "strict transform profile t: {}", list(&r.profile)).unwrap();
            writeln!(o, "-M^-1 t: {}", vec_text(&r.from_profile)).unwrap();
            matrices(o, &r.intersection_matrix, Some(&r.inverse));
        }
        Report::Obstruct(r) => {
            writeln!(o, "{} on {}", r.adjacency, r.source).unwrap();
            verdict(o, &r.verdict);
            writeln!(o, "joint model points: {}", list(&r.joint_points)).unwrap();
            writeln!(o, "row e: {}", vec_text(&r.row_e)).unwrap();
            writeln!(o, "row f: {}", vec_text(&r.row_f)).unwrap();
            matrices(o, &r.intersection_matrix, Some(&r.inverse));
        }
        Report::Returns(r) => {
            writeln!(o, "returns system on {}, special row {}, b = {}", r.source, r.special, list(&r.b)).unwrap();
            writeln!(o, "a (M a = b - e_special): {}", vec_text(&r.a)).unwrap();
            writeln!(
                o,
                "a (M a = (1 - b_special, ...)): {}",
                vec_text(&r.printed_convention_solution)
            )
            .unwrap();
            verdict(o, &r.verdict);
            matrices(o, &r.intersection_matrix, Some(&r.inverse));
        }
        Report::Table(r) => {
            writeln!(o, "adjacency table for {} (row e, column f: N_F_f in N_F_e)", r.source).unwrap();
            let mut header = String::from("     ");
            for f in 0..r.size {
                write!(header, " F{f:<3}").unwrap();
            }
            writeln!(o, "{}", header.trim_end()).unwrap();
            for e in 0..r.size {
                let mut line = format!("F{e:<4}");
                for f in 0..r.size {
                    let cell = if e == f {
                        "-"
                    } else {
                        match r.entries.iter().find(|t| t.e == e && t.f == f) {
                            Some(t) if t.verdict.is_ruled_out() => "X",
                            Some(_) => "?",
                            None => " ",
                        }
                    };
                    write!(line, " {cell:<4}").unwrap();
                }
                writeln!(o, "{}", line.trim_end()).unwrap();
            }
            writeln!(o, "X = ruled out, ? = not ruled out").unwrap();
            for t in r.entries.iter().filter(|t| t.verdict.is_ruled_out()) {
                write!(o, "N_F{} in N_F{}: ", t.f, t.e).unwrap();
                verdict(o, &t.verdict);
            }
            matrices(o, &r.intersection_matrix, Some(&r.inverse));
        }
        Report::Euler(r) => {
            let c = &r.certificate;
            writeln!(o, "euler bound on {}, a = {}, attach {}", r.source, list(&r.coefficients), r.attach).unwrap();
            writeln!(o, "disks over E_0: {}", c.b0).unwrap();
            writeln!(o, "balls: {}", c.balls).unwrap();
            writeln!(o, "tubes: {}", c.tubes).unwrap();
            writeln!(o, "bound: {}", c.bound).unwrap();
            writeln!(o, "contradicts disk: {}", c.contradicts_disk).unwrap();
            if !c.minimality_flags.is_empty() {
                writeln!(o, "non-minimal: rational -1 curves at {}", list(&c.minimality_flags)).unwrap();
            }
            writeln!(o, "certificate: {}", if c.certified { "issued" } else { "withheld" }).unwrap();
            matrices(o, &r.intersection_matrix, r.inverse.as_ref());
        }
        Report::Dfd(r) => {
            writeln!(o, "wedge model {}, special F_{}", r.source, r.special).unwrap();
            writeln!(o, "a: {}", list(&r.a)).unwrap();
            writeln!(o, "c: {}", list(&r.c)).unwrap();
            writeln!(o, "d: {}", list(&r.d)).unwrap();
            writeln!(o, "b = a - M^-1 (c + d): {}", vec_text(&r.b)).unwrap();
            if let (Some(b), Some(ok)) = (&r.supplied_b, r.supplied_b_verified) {
                writeln!(o, "supplied b {}: {}", vec_text(b), if ok { "consistent" } else { "inconsistent" }).unwrap();
            }
            match &r.lifting {
                Some(l) => {
                    writeln!(o, "lifts: {}", l.lifts).unwrap();
                    writeln!(o, "contradiction: {}", l.contradiction).unwrap();
                    writeln!(o, "reason: {}", l.reason).unwrap();
                }
                None => writeln!(o, "lifting argument skipped: target not declared minimal").unwrap(),
            }
            matrices(o, &r.intersection_matrix, Some(&r.inverse));
        }
        Report::Pair(r) => {
            match (r.e, r.f) {
                (Some(e), Some(f)) => writeln!(o, "pair (E = F_{e}, F = F_{f}) on {}", r.source).unwrap(),
                _ => writeln!(o, "graph {}", r.source).unwrap(),
            }
            writeln!(o, "canonical key: {}", r.canonical_key).unwrap();
            if let Some(v) = &r.verdict {
                verdict(o, v);
            }
            if let Some(kb) = &r.kb {
                match kb.stored {
                    Some(s) => writeln!(o, "store {}: hit, {s}", kb.path).unwrap(),
                    None => writeln!(o, "store {}: miss", kb.path).unwrap(),
                }
                if let Some(outcome) = kb.outcome {
                    writeln!(o, "store update: {outcome:?}").unwrap();
                }
            }
            matrices(o, &r.intersection_matrix, r.inverse.as_ref());
        }
        Report::Validate(r) => {
            if r.diagnostics.is_empty() {
                writeln!(o, "{}: ok", r.source).unwrap();
            }
            for d in &r.diagnostics {
                writeln!(o, "{}: {d}", r.source).unwrap();
            }
        }
    }
    out
}
