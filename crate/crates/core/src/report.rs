//! Rendering of audit reports: machine JSON and a human-readable summary
//! whose bound table mirrors the discharging lower-bound layout.

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::discharge::{table1_bracket, AuditReport, ClaimResult};

pub fn rational_str(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn claim_json(c: &ClaimResult) -> Value {
    json!({ "holds": c.holds, "witnesses": c.witnesses })
}

pub fn audit_to_json(report: &AuditReport) -> Value {
    let claims = &report.claims;
    json!({
        "vertices": report.vertices,
        "edges": report.edges,
        "faces": report.faces,
        "plane": report.is_plane,
        "surface_euler": report.surface.euler,
        "initial_total": rational_str(&report.initial_total),
        "initial_within_bound": report.initial_within_bound,
        "final_total": rational_str(&report.final_total),
        "conservation_ok": report.conservation_ok,
        "pot_final": rational_str(&report.pot_final),
        "rule_error": report.rule_error,
        "ell": report.ell,
        "claims": {
            "claim2_degree_sums": claim_json(&claims.claim2),
            "claim3_low_degree_in_h": claim_json(&claims.claim3),
            "claim4_no_low_degree": claim_json(&claims.claim4),
            "claim5_leaf_or_high": claim_json(&claims.claim5),
            "claim7_no_small_faces": claim_json(&claims.claim7),
            "claim8_pot_inequality": claims.claim8.as_ref().map(|s| json!({
                "lhs": rational_str(&s.lhs),
                "rhs": rational_str(&s.rhs),
                "strict_holds": s.strict_holds(),
                "a_sizes": s.a_sizes,
                "coefficient_identity_ok": s.coefficient_identity_ok,
            })),
        },
        "faces_nonzero": report.face_nonzero.iter()
            .map(|(f, c)| json!({ "face": f, "charge": rational_str(c) }))
            .collect::<Vec<_>>(),
        "negative_elements": report.negative_elements.iter()
            .map(|(el, c)| json!({ "element": el.to_string(), "charge": rational_str(c) }))
            .collect::<Vec<_>>(),
        "vertex_bounds": report.vertex_bounds.iter().map(|b| json!({
            "vertex": b.vertex,
            "degree": b.degree,
            "x_faces": b.x,
            "y_leaves": b.y,
            "pot_flow": rational_str(&b.p),
            "final": rational_str(&b.actual),
            "regime": format!("{:?}", b.regime),
            "bound": b.bound.as_ref().map(rational_str),
            "premise_ok": b.premise_ok,
            "bound_holds": b.bound_holds,
            "table1": b.table1.as_ref().map(|(h, bracket, entry)| json!({
                "h": h,
                "bracket": rational_str(bracket),
                "entry": rational_str(entry),
            })),
        })).collect::<Vec<_>>(),
    })
}

fn claim_line(out: &mut String, name: &str, c: &ClaimResult) {
    out.push_str(&format!(
        "  {name}: {}\n",
        if c.holds { "pass".to_string() } else { format!("FAIL ({} witnesses)", c.witnesses.len()) }
    ));
    for w in c.witnesses.iter().take(4) {
        out.push_str(&format!("      - {w}\n"));
    }
}

/// Human-readable audit: charge totals, claim summary, negative elements,
/// and the rule-(d) lower-bound table.
pub fn render_audit(report: &AuditReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "graph: {} vertices, {} edges, {} faces ({})\n",
        report.vertices,
        report.edges,
        report.faces,
        if report.is_plane { "plane" } else { "NOT plane" }
    ));
    out.push_str(&format!(
        "initial total {} (bound -6e = {}: {}), final total {}, conservation {}\n",
        rational_str(&report.initial_total),
        -6 * report.surface.euler,
        if report.initial_within_bound { "within" } else { "EXCEEDED" },
        rational_str(&report.final_total),
        if report.conservation_ok { "exact" } else { "BROKEN" },
    ));
    out.push_str(&format!("pot final {}\n", rational_str(&report.pot_final)));
    if let Some(err) = &report.rule_error {
        out.push_str(&format!("rule error: {err}\n"));
    }
    out.push_str("claims:\n");
    claim_line(&mut out, "claim 2 (degree sums)   ", &report.claims.claim2);
    claim_line(&mut out, "claim 3 (low deg in H)  ", &report.claims.claim3);
    claim_line(&mut out, "claim 4 (V_[2,t+1] = 0) ", &report.claims.claim4);
    claim_line(&mut out, "claim 5 (leaf or high)  ", &report.claims.claim5);
    claim_line(&mut out, "claim 7 (faces m >= 3)  ", &report.claims.claim7);
    match &report.claims.claim8 {
        Some(s) => out.push_str(&format!(
            "  claim 8 (pot inequality): lhs {} < rhs {}: {}\n",
            rational_str(&s.lhs),
            rational_str(&s.rhs),
            if s.strict_holds() { "pass" } else { "FAIL" }
        )),
        None => out.push_str("  claim 8: not applicable (l = t - d undefined)\n"),
    }
    if report.negative_elements.is_empty() {
        out.push_str("no element ends negative\n");
    } else {
        out.push_str("negative final charges:\n");
        for (el, c) in &report.negative_elements {
            out.push_str(&format!("  {el}: {}\n", rational_str(c)));
        }
    }
    out.push_str("rule-(d) lower bounds on final vertex charge (entries Delta-d-*):\n");
    out.push_str("  deg \\ l        0        1        2        3\n");
    for row in 0..4usize {
        let h = 3 - row;
        let mut line = format!("  Delta-{h}+l ");
        for ell in 0..4usize {
            if ell > h {
                line.push_str(&format!("{:>9}", "*"));
            } else {
                line.push_str(&format!("{:>9}", rational_str(&table1_bracket(ell, h))));
            }
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
