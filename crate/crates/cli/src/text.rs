//! Plain-text reports.

use std::collections::BTreeSet;
use std::fmt::Write;

use preperiodic::certify::{BoundCheck, BoundReport, BoundValue, SUnitCertificate};
use preperiodic::dynmap::RationalMap;
use preperiodic::families::ClaimReport;
use preperiodic::portrait::Portrait;
use preperiodic::{ProjPoint, Rat};

use crate::expr::{MapExpr, Poly};

/// Exact values longer than this many digits are shown as powers of two.
const MAX_DIGITS: usize = 60;

/// The map as a function of `x`, in the parser's syntax.
pub fn affine(map: &RationalMap) -> String {
    let (num, den) = map.affine_coeffs();
    let poly = |v: Vec<_>| Poly::new(v.into_iter().map(Rat::from_integer).collect());
    MapExpr {
        source: String::new(),
        num: poly(num),
        den: poly(den),
    }
    .to_string()
}

pub fn points(ps: &BTreeSet<ProjPoint>) -> String {
    if ps.is_empty() {
        return "(none)".into();
    }
    ps.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn map_header(out: &mut String, map: &RationalMap) {
    writeln!(out, "map: {}", affine(map)).unwrap();
    writeln!(out, "forms: {map}").unwrap();
    writeln!(out, "degree: {}", map.degree()).unwrap();
    writeln!(out, "resultant: {}", map.resultant()).unwrap();
    write!(out, "bad primes: {}", map.bad_primes()).unwrap();
    if let Some(c) = map.res_cofactor() {
        write!(out, " and the unfactored composite {c}").unwrap();
    }
    out.push('\n');
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "complete"
    } else {
        "INCOMPLETE"
    }
}

pub fn portrait(out: &mut String, p: &Portrait) {
    map_header(out, &p.map);
    let c = p.counts();
    writeln!(out, "counts: per={} tail={} preper={}", c.per, c.tail, c.preper).unwrap();
    let lengths: Vec<String> = c.cycle_lengths.iter().map(ToString::to_string).collect();
    writeln!(out, "cycle lengths: {}", lengths.join(" ")).unwrap();
    writeln!(out, "max tail depth: {}", c.max_tail_depth).unwrap();
    out.push_str("cycles:\n");
    for cycle in &p.cycles {
        let walk: Vec<String> = cycle.iter().chain(cycle.first()).map(ToString::to_string).collect();
        writeln!(out, "  {}", walk.join(" -> ")).unwrap();
    }
    out.push_str("tails:\n");
    for t in &p.tails {
        writeln!(
            out,
            "  {} -> {} (depth {}, enters at {})",
            t.point, t.image, t.depth, t.entry
        )
        .unwrap();
    }
    let k = &p.completeness;
    writeln!(
        out,
        "completeness: periods up to {}; periodic roots {}; preimage roots {}; bad primes {}",
        k.n_max,
        flag(k.periodic_roots_complete),
        flag(k.preimage_roots_complete),
        flag(k.bad_primes_complete)
    )
    .unwrap();
}

pub fn claims(out: &mut String, r: &ClaimReport) {
    writeln!(out, "claims for {}:", r.spec).unwrap();
    for c in &r.claims {
        writeln!(out, "  {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name).unwrap();
    }
}

/// Oracle comparison: points found by search against portrait points of
/// the same height.
pub fn oracle(out: &mut String, h: u64, found: &BTreeSet<ProjPoint>, expected: &BTreeSet<ProjPoint>) {
    writeln!(out, "oracle (height <= {h}): {}", points(found)).unwrap();
    writeln!(out, "portrait (height <= {h}): {}", points(expected)).unwrap();
    let missing: BTreeSet<_> = found.difference(expected).cloned().collect();
    let extra: BTreeSet<_> = expected.difference(found).cloned().collect();
    if missing.is_empty() && extra.is_empty() {
        out.push_str("diff: empty\n");
    } else {
        writeln!(out, "diff: missing from portrait: {}", points(&missing)).unwrap();
        writeln!(out, "diff: missing from oracle: {}", points(&extra)).unwrap();
    }
}

pub fn value(v: &BoundValue) -> String {
    match v {
        BoundValue::Exact(n) => {
            let s = n.to_string();
            if s.len() <= MAX_DIGITS {
                s
            } else {
                format!("2^{:.3} ({} digits)", v.log2(), s.len())
            }
        }
        other => other.to_string(),
    }
}

fn table(out: &mut String, rows: &[Vec<String>]) {
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
}

pub fn bounds(out: &mut String, r: &BoundReport, checks: &[BoundCheck]) {
    let approx = if r.s_exact { "" } else { " (lower bound)" };
    writeln!(out, "s = {}{approx}, d = {}", r.s, r.d).unwrap();
    let observed = !checks.is_empty();
    let mut header = vec!["bound", "quantity", "hypothesis", "value", "formula"];
    if observed {
        header.extend(["observed", "hypothesis holds", "result"]);
    }
    let mut rows = vec![header.into_iter().map(String::from).collect::<Vec<_>>()];
    for b in &r.bounds {
        let mut row = vec![
            b.name.to_string(),
            b.quantity.to_string(),
            b.hypothesis.to_string(),
            value(&b.value),
            b.formula.to_string(),
        ];
        if let Some(c) = checks.iter().find(|c| c.name == b.name) {
            row.push(c.observed.to_string());
            row.push(if c.applies { "yes" } else { "no" }.into());
            row.push(match (c.applies, c.pass) {
                (false, _) => "vacuous".into(),
                (true, true) => "PASS".into(),
                (true, false) => "FAIL".into(),
            });
        }
        rows.push(row);
    }
    table(out, &rows);
}

pub fn certificates(out: &mut String, certs: &[SUnitCertificate]) {
    let yes_no = |b: bool| if b { "yes" } else { "no" }.to_string();
    let mut rows = vec![["tail point", "periodic point", "cross term", "excluded", "s_unit_ok"]
        .map(String::from)
        .to_vec()];
    for c in certs {
        rows.push(vec![
            c.tail_point.to_string(),
            c.periodic_point.to_string(),
            c.cross_term.to_string(),
            yes_no(c.excluded),
            yes_no(c.s_unit_ok),
        ]);
    }
    table(out, &rows);
    let excluded = certs.iter().filter(|c| c.excluded).count();
    let failures = certs.iter().filter(|c| c.is_failure()).count();
    writeln!(
        out,
        "summary: {} pairs, {excluded} excluded, {failures} failures",
        certs.len()
    )
    .unwrap();
}
