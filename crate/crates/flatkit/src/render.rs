//! Text and JSON rendering for CLI results.
//!
//! JSON output is deterministic: maps are emitted with sorted keys, every
//! schema key is always present (`null` when empty), and timings are never
//! included, so two runs on the same input produce byte-identical bytes.
//! Text output is for humans and may include timings.

use flatkit_core::flatness::{FlatnessStatus, FlatnessVerdict, Scope};
use flatkit_core::ideal_ops::Dimension;
use flatkit_core::oracle::{Agreement, InstanceOutcome, SearchBounds, TorsionWitness};
use flatkit_core::torsion::TorsionComputation;
use flatkit_core::{Polynomial, VarSet};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn scope_str(s: Scope) -> &'static str {
    match s {
        Scope::Global => "global",
        Scope::AtOrigin => "at-origin",
    }
}

fn polys_json(ps: &[Polynomial], vars: &VarSet) -> Value {
    Value::Array(
        ps.iter()
            .map(|p| Value::String(p.to_display_string(vars)))
            .collect(),
    )
}

pub fn verdict_text(v: &FlatnessVerdict, show_certificate: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("verdict: {}\n", v.status));
    out.push_str(&format!("scope: {}\n", scope_str(v.scope)));
    if v.power_used > 0 {
        out.push_str(&format!("tensor power: {}\n", v.power_used));
    }
    if v.zero_module {
        out.push_str("note: the presented module is zero\n");
    }
    if v.status == FlatnessStatus::Inconclusive {
        out.push_str(&format!(
            "note: inconclusive, tested power {} is below the base dimension\n",
            v.power_used
        ));
    }
    if let Some(k) = v.limit {
        out.push_str(&format!("limit hit: {k}\n"));
    }
    // The certificate lives in the tensor power, which has its own copies
    // of the fiber variables; display it over that universe.
    if let (Some(c), Some(w)) = (&v.certificate, &v.witness_module) {
        let vars = w.vars();
        if show_certificate {
            out.push_str(&format!(
                "certificate element: {}\n",
                c.element.to_display_string(vars)
            ));
            out.push_str(&format!(
                "certificate annihilator: {}\n",
                c.annihilator.to_display_string(vars)
            ));
            let ok = c.trace.element_outside && c.trace.product_inside && c.trace.annihilator_proper;
            out.push_str(&format!("certificate verified: {}\n", if ok { "yes" } else { "NO" }));
        } else {
            out.push_str("certificate: available, rerun with --certificate\n");
        }
    }
    out
}

pub fn verdict_json(v: &FlatnessVerdict) -> Value {
    let cert = match (&v.certificate, &v.witness_module) {
        (Some(c), Some(w)) => json!({
            "element": c.element.to_display_string(w.vars()),
            "annihilator": c.annihilator.to_display_string(w.vars()),
        }),
        _ => Value::Null,
    };
    json!({
        "status": v.status.to_string(),
        "scope": scope_str(v.scope),
        "power": v.power_used,
        "authoritative": v.authoritative,
        "zero_module": v.zero_module,
        "certificate": cert,
        "limit": v.limit.map(|k| k.to_string()),
        // Deterministic counters, safe for byte-identical output; wall
        // times are deliberately absent.
        "stats": {
            "bases_computed": v.stats.bases_computed,
            "spairs_considered": v.stats.spairs_considered,
            "spairs_reduced": v.stats.spairs_reduced,
            "reduction_steps": v.stats.reduction_steps,
            "max_basis_size": v.stats.max_basis_size,
            "max_degree_seen": v.stats.max_degree_seen,
        },
    })
}

pub fn torsion_text(t: &TorsionComputation, power: u32, vars: &VarSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("tensor power: {power}\n"));
    if t.generators.is_empty() {
        out.push_str("torsion-free at this power\n");
    } else {
        out.push_str(&format!("torsion generators: {}\n", t.generators.len()));
        for g in &t.generators {
            out.push_str(&format!("  {}\n", g.to_display_string(vars)));
        }
    }
    out
}

pub fn torsion_json(t: &TorsionComputation, power: u32, vars: &VarSet) -> Value {
    json!({
        "power": power,
        "torsion_free": t.generators.is_empty(),
        "generators": t.generators.iter()
            .map(|g| Value::String(g.to_display_string(vars)))
            .collect::<Vec<_>>(),
    })
}

pub fn first_power_text(first: Option<u32>, base_dim: usize) -> String {
    match first {
        Some(k) => format!("first torsion power: {k}\n"),
        None => format!("no torsion up to power {base_dim}; the module is flat\n"),
    }
}

pub fn first_power_json(first: Option<u32>, base_dim: usize) -> Value {
    json!({
        "base_dimension": base_dim,
        "first_power": first,
    })
}

pub fn dimension_text(d: &Dimension, label: &str) -> String {
    match d {
        Dimension::EmptyVariety => format!("{label}: empty\n"),
        Dimension::Of(k) => format!("{label}: {k}\n"),
    }
}

pub fn dimension_json(d: &Dimension, point: Option<&str>) -> Value {
    let (dim, empty) = match d {
        Dimension::EmptyVariety => (Value::Null, true),
        Dimension::Of(k) => (json!(k), false),
    };
    match point {
        Some(p) => json!({ "dimension": dim, "empty": empty, "point": p }),
        None => json!({ "dimension": dim, "empty": empty }),
    }
}

pub fn image_text(gens: &[Polynomial], vars: &VarSet) -> String {
    if gens.is_empty() {
        return "image closure: the whole base (dominant)\n".into();
    }
    let mut out = String::from("image closure generators:\n");
    for g in gens {
        out.push_str(&format!("  {}\n", g.to_display_string(vars)));
    }
    out
}

pub fn image_json(gens: &[Polynomial], vars: &VarSet) -> Value {
    json!({
        "dominant": gens.is_empty(),
        "generators": polys_json(gens, vars),
    })
}

pub fn basis_text(elems: &[String], order: &str) -> String {
    let mut out = format!(
        "groebner basis ({order}): {} element{}\n",
        elems.len(),
        if elems.len() == 1 { "" } else { "s" }
    );
    for e in elems {
        out.push_str(&format!("  {e}\n"));
    }
    out
}

pub fn basis_json(elems: &[String], order: &str) -> Value {
    json!({
        "basis": elems,
        "order": order,
    })
}

pub fn oracle_text(
    witness: &Option<TorsionWitness>,
    bounds: &SearchBounds,
    power: u32,
    vars: &VarSet,
) -> String {
    let mut out = format!("tensor power: {power}\nsearch bounds: {bounds}\n");
    match witness {
        None => out.push_str("no witness found within the bounds\n"),
        Some(w) => {
            out.push_str(&format!("witness element: {}\n", w.element.to_display_string(vars)));
            out.push_str(&format!(
                "witness annihilator: {}\n",
                w.annihilator.to_display_string(vars)
            ));
        }
    }
    out
}

pub fn oracle_json(
    witness: &Option<TorsionWitness>,
    bounds: &SearchBounds,
    power: u32,
    vars: &VarSet,
) -> Value {
    let (elem, ann) = match witness {
        None => (Value::Null, Value::Null),
        Some(w) => (
            Value::String(w.element.to_display_string(vars)),
            Value::String(w.annihilator.to_display_string(vars)),
        ),
    };
    json!({
        "found": witness.is_some(),
        "element": elem,
        "annihilator": ann,
        "power": power,
        "bounds": {
            "witness": bounds.witness_degree,
            "multiplier": bounds.multiplier_degree,
        },
    })
}

/// One corpus outcome plus its wall time; text shows the time, JSON omits it.
pub struct TimedOutcome {
    pub outcome: InstanceOutcome,
    pub seconds: f64,
}

pub fn corpus_text(entries: &[TimedOutcome], skipped: &[String]) -> String {
    let width = entries
        .iter()
        .map(|e| e.outcome.name.len())
        .chain(skipped.iter().map(|s| s.len()))
        .max()
        .unwrap_or(4)
        .max(4);
    let mut out = String::new();
    for e in entries {
        let status = match &e.outcome.engine_status {
            Some(s) => s.to_string(),
            None => "error".into(),
        };
        let agreement = match &e.outcome.agreement {
            Agreement::Agree => "agree".to_string(),
            Agreement::AgreeWithNote(n) => format!("agree ({n})"),
            Agreement::Mismatch(m) => format!("MISMATCH: {m}"),
        };
        out.push_str(&format!(
            "{:width$}  {:10}  {:6.2}s  {}\n",
            e.outcome.name,
            status,
            e.seconds,
            agreement,
            width = width
        ));
    }
    for s in skipped {
        out.push_str(&format!("{s:width$}  skipped (heavy)\n", width = width));
    }
    let mismatches = entries
        .iter()
        .filter(|e| matches!(e.outcome.agreement, Agreement::Mismatch(_)))
        .count();
    if mismatches == 0 {
        out.push_str(&format!(
            "corpus: {} instance{} checked, all agree\n",
            entries.len(),
            if entries.len() == 1 { "" } else { "s" }
        ));
    } else {
        out.push_str(&format!(
            "corpus: {} instance{} checked, {} MISMATCH{}\n",
            entries.len(),
            if entries.len() == 1 { "" } else { "s" },
            mismatches,
            if mismatches == 1 { "" } else { "ES" }
        ));
    }
    out
}

pub fn corpus_json(entries: &[TimedOutcome], skipped: &[String]) -> Value {
    let instances: Vec<Value> = entries
        .iter()
        .map(|e| {
            let (agreement, note) = match &e.outcome.agreement {
                Agreement::Agree => ("agree", Value::Null),
                Agreement::AgreeWithNote(n) => ("agree-with-note", Value::String(n.clone())),
                Agreement::Mismatch(m) => ("mismatch", Value::String(m.clone())),
            };
            json!({
                "name": e.outcome.name,
                "status": e.outcome.engine_status.map(|s| s.to_string()),
                "agreement": agreement,
                "note": note,
            })
        })
        .collect();
    let all_agree = entries
        .iter()
        .all(|e| !matches!(e.outcome.agreement, Agreement::Mismatch(_)));
    json!({
        "all_agree": all_agree,
        "instances": instances,
        "skipped": skipped,
    })
}

/// Serializes with sorted keys and a trailing newline.
pub fn emit_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let v = json!({"zebra": 1, "apple": 2, "mango": {"z": 1, "a": 2}});
        let s = emit_json(&v);
        let apple = s.find("apple").unwrap();
        let zebra = s.find("zebra").unwrap();
        assert!(apple < zebra);
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn corpus_text_flags_mismatches() {
        let entries = vec![TimedOutcome {
            outcome: InstanceOutcome {
                name: "bad".into(),
                engine_status: Some(flatkit_core::flatness::FlatnessStatus::Flat),
                witness: None,
                bounds_used: SearchBounds::new(1, 1),
                agreement: Agreement::Mismatch("oracle found a witness".into()),
            },
            seconds: 0.01,
        }];
        let t = corpus_text(&entries, &[]);
        assert!(t.contains("MISMATCH"));
        assert!(t.contains("1 instance checked, 1 MISMATCH\n"));
    }
}
