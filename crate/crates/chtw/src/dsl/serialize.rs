//! Canonical serialization of a system back into model text. Deterministic:
//! declarations in registration order, fields in canonical literal forms
//! (`const` where a field is uniform, inline `values` otherwise, row-major),
//! numbers in Rust's shortest round-trip notation so parsing the output
//! recovers every value exactly.

use std::fmt::Write;

use crate::field::{FieldValues, Kernel, Schedule};
use crate::model::{CHTWSystem, WPayload};

pub fn serialize(system: &CHTWSystem) -> String {
    let mut out = String::new();

    for space in system.spaces() {
        let _ = writeln!(out, "space {} {{", space.id);
        for axis in &space.axes {
            let _ = writeln!(
                out,
                "  axis {} min {} max {} cells {};",
                axis.name, axis.min, axis.max, axis.cells
            );
        }
        out.push_str("}\n\n");
    }

    for brane in system.cbranes() {
        let _ = writeln!(out, "cbrane {} on {} {{", brane.id, brane.space);
        let _ = writeln!(out, "  init {};", field_values(&brane.initial));
        out.push_str("}\n\n");
    }

    for brane in system.tbranes() {
        let _ = writeln!(out, "tbrane {} on {} {{", brane.id, brane.space);
        let _ = writeln!(out, "  rate {};", scheduled_field(&brane.rate));
        out.push_str("}\n\n");
    }

    for carrier in system.hcarriers() {
        let _ = writeln!(
            out,
            "hcarrier {} {} -> {} {{",
            carrier.id, carrier.source, carrier.target
        );
        let _ = writeln!(out, "  kind {};", carrier.kind);
        let _ = writeln!(out, "  threshold {};", scheduled_field(&carrier.threshold));
        out.push_str("}\n\n");
    }

    for carrier in system.wcarriers() {
        let _ = writeln!(
            out,
            "wcarrier {} {} -> {} {{",
            carrier.id, carrier.source, carrier.target
        );
        match &carrier.payload {
            WPayload::Pointwise(gain) => {
                out.push_str("  mode pointwise;\n");
                let _ = writeln!(out, "  gain {};", scheduled_field(gain));
            }
            WPayload::Kernel(kernel) => {
                out.push_str("  mode kernel;\n");
                let _ = writeln!(out, "  kernel {};", scheduled_kernel(kernel));
            }
        }
        out.push_str("}\n\n");
    }

    out
}

fn number(v: f64) -> String {
    // `Display` for f64 is shortest-round-trip, so parse(serialize(x)) == x
    format!("{v}")
}

fn number_list(values: &[f64]) -> String {
    let mut s = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&number(*v));
    }
    s.push(']');
    s
}

fn field_values(values: &FieldValues) -> String {
    match values.split_first() {
        Some((first, rest)) if rest.iter().all(|v| v == first) => {
            format!("const {}", number(*first))
        }
        _ => format!("values {}", number_list(values)),
    }
}

fn scheduled_field(field: &Schedule<FieldValues>) -> String {
    if field.is_stationary() {
        return field_values(&field.entries()[0].1);
    }
    let mut s = String::from("schedule { ");
    for (i, (start, values)) in field.entries().iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{start}: {}", field_values(values));
    }
    s.push_str(" }");
    s
}

fn kernel_literal(kernel: &Kernel) -> String {
    match kernel.values().split_first() {
        Some((first, rest)) if rest.iter().all(|v| v == first) => {
            format!("uniform {}", number(*first))
        }
        _ => format!("values {}", number_list(kernel.values())),
    }
}

fn scheduled_kernel(kernel: &Schedule<Kernel>) -> String {
    if kernel.is_stationary() {
        return kernel_literal(&kernel.entries()[0].1);
    }
    let mut s = String::from("schedule { ");
    for (i, (start, k)) in kernel.entries().iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{start}: {}", kernel_literal(k));
    }
    s.push_str(" }");
    s
}
