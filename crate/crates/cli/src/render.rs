//! Output formatting for each subcommand. JSON hex values are `0x` prefixed
//! and uppercase; CSV hex values are bare.

use std::fmt::Write;

use diffspn::exhaustive::scan_max;
use diffspn::report::ReportBundle;
use diffspn::trail::{max_sbox_prob, SearchResult};
use diffspn::verify::VerificationMode;
use diffspn::{
    compute_ddt, format_hex, min_active_sboxes, search_trails, top_characteristics, CipherDescription,
    KeyAssignment, Objective, SBox4, Trail, VerificationResult,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output is plain data");
    s.push('\n');
    s
}

pub fn ddt(sboxes: &[SBox4], fmt: Format) -> String {
    let tables: Vec<_> = sboxes.iter().map(|s| (s, compute_ddt(s))).collect();
    match fmt {
        Format::Json => {
            let objs: Vec<Value> = tables
                .iter()
                .map(|(s, d)| json!({"sbox": s.id(), "counts": d.counts, "uniformity": d.uniformity()}))
                .collect();
            match objs.as_slice() {
                [one] => to_json(one),
                _ => to_json(&objs),
            }
        }
        Format::Csv => {
            let mut out = String::from("sbox,a_hex,b_hex,count\n");
            for (s, d) in &tables {
                for a in 0..16u8 {
                    for b in 0..16u8 {
                        writeln!(out, "{},{a:X},{b:X},{}", s.id(), d.get(a, b)).unwrap();
                    }
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (s, d) in &tables {
                writeln!(out, "S-box {} = {}  (uniformity {})", s.id(), s.to_hex(), d.uniformity()).unwrap();
                out.push_str("a\\b");
                for b in 0..16 {
                    write!(out, "{b:>3X}").unwrap();
                }
                out.push('\n');
                for a in 0..16u8 {
                    write!(out, "{a:>3X}").unwrap();
                    for b in 0..16u8 {
                        write!(out, "{:>3}", d.get(a, b)).unwrap();
                    }
                    out.push('\n');
                }
                out.push('\n');
            }
            out
        }
    }
}

#[derive(Serialize)]
struct Row {
    a_hex: String,
    b_hex: String,
    count: u32,
}

fn row(a: u16, b: u16, count: u32) -> Row {
    Row {
        a_hex: format_hex(a),
        b_hex: format_hex(b),
        count,
    }
}

pub fn scan(
    desc: &CipherDescription,
    key: &KeyAssignment,
    threshold: Option<u32>,
    floor: Option<u32>,
    fmt: Format,
) -> diffspn::Result<String> {
    let dist = scan_max(desc, key, None, floor)?;
    let chars = match threshold {
        Some(_) => top_characteristics(desc, key, threshold)?,
        None => dist.argmax.clone(),
    };
    let rows: Vec<Row> = chars.iter().map(|c| row(c.input_diff, c.output_diff, c.count)).collect();
    Ok(match fmt {
        Format::Json => {
            let mut v = json!({
                "cipher": desc.name(),
                "rounds": desc.rounds(),
                "maxCount": dist.max_count,
                "probability": format!("{}/65536", dist.max_count),
                "characteristics": rows,
            });
            if let Some(t) = &dist.full_table {
                let table: Vec<Row> = t.iter().map(|(&(a, b), &c)| row(a, b, c)).collect();
                v["fullTable"] = json!(table);
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut out = String::from("a_hex,b_hex,count\n");
            for c in &chars {
                writeln!(out, "{:04X},{:04X},{}", c.input_diff, c.output_diff, c.count).unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "{}: {} rounds, max D(a,b) = {} (probability {}/65536)\n",
                desc.name(),
                desc.rounds(),
                dist.max_count,
                dist.max_count
            );
            for c in &chars {
                writeln!(out, "  {} -> {}  {}", format_hex(c.input_diff), format_hex(c.output_diff), c.count).unwrap();
            }
            out
        }
    })
}

fn trail_json(t: &Trail) -> Value {
    json!({
        "diffs_hex": t.round_diffs.iter().map(|&d| format_hex(d)).collect::<Vec<_>>(),
        "probability": t.probability.to_string(),
        "log2": t.probability.log2(),
        "activeSboxes": t.active_count,
        "sboxLayers": t.steps.iter().map(|s| json!({
            "round": s.round + 1,
            "in_hex": format_hex(s.input),
            "out_hex": format_hex(s.output),
            "nibbleProbs": s.nibble_probs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn trails(
    desc: &CipherDescription,
    rounds: usize,
    objective: Objective,
    limit: Option<usize>,
    fmt: Format,
) -> diffspn::Result<String> {
    let res: SearchResult = search_trails(desc, rounds, objective, limit)?;
    let min_active = match res.min_active {
        Some(m) => m,
        None => min_active_sboxes(desc, rounds)?,
    };
    let bound = max_sbox_prob(desc).pow(min_active);
    let t = &res.trail;
    Ok(match fmt {
        Format::Json => {
            let mut v = json!({
                "cipher": desc.name(),
                "rounds": rounds,
                "objective": objective,
                "minActive": min_active,
                "bestTrail": trail_json(t),
                "bound": bound.to_string(),
            });
            if let Some(all) = &res.all_optimal {
                v["allOptimal"] = json!(all.iter().map(trail_json).collect::<Vec<_>>());
                v["truncated"] = json!(res.truncated);
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut out = String::from("trail,round,diff_hex,probability\n");
            let all = res.all_optimal.as_deref().unwrap_or(std::slice::from_ref(t));
            for (i, t) in all.iter().enumerate() {
                for (r, d) in t.round_diffs.iter().enumerate() {
                    writeln!(out, "{i},{r},{d:04X},{}", t.probability).unwrap();
                }
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "{}: {rounds} rounds, min active S-boxes {min_active}, bound {bound}\n",
                desc.name()
            );
            let diffs: Vec<String> = t.round_diffs.iter().map(|&d| format_hex(d)).collect();
            writeln!(out, "trail {}  p = {} (2^{:.2})", diffs.join(" -> "), t.probability, t.probability.log2())
                .unwrap();
            if let Some(all) = &res.all_optimal {
                writeln!(out, "{} optimal trails{}", all.len(), if res.truncated { " (truncated)" } else { "" })
                    .unwrap();
            }
            out
        }
    })
}

pub fn verification(r: &VerificationResult, fmt: Format) -> String {
    let mode = match r.mode {
        VerificationMode::ExhaustiveFixedKey => "exhaustive-fixed-key",
        VerificationMode::KeyedAverage => "keyed-average",
    };
    match fmt {
        Format::Json => {
            let mut v = json!({
                "inputDiff": format_hex(r.input_diff),
                "outputDiff": format_hex(r.output_diff),
                "mode": mode,
                "keysTested": r.keys_tested,
                "seed": r.seed,
            });
            match r.mode {
                VerificationMode::ExhaustiveFixedKey => v["count"] = json!(r.count()),
                VerificationMode::KeyedAverage => {
                    v["mean"] = json!(r.mean);
                    v["stderr"] = json!(r.stderr);
                    v["counts"] = json!(r.counts);
                }
            }
            to_json(&v)
        }
        Format::Csv => format!(
            "a_hex,b_hex,mode,mean,stderr,keys,seed\n{:04X},{:04X},{mode},{},{},{},{}\n",
            r.input_diff, r.output_diff, r.mean, r.stderr, r.keys_tested, r.seed
        ),
        Format::Text => match r.mode {
            VerificationMode::ExhaustiveFixedKey => format!(
                "{} -> {}: {} of 65536 pairs\n",
                format_hex(r.input_diff),
                format_hex(r.output_diff),
                r.count()
            ),
            VerificationMode::KeyedAverage => format!(
                "{} -> {}: mean {} ± {} over {} keys (seed {})\n",
                format_hex(r.input_diff),
                format_hex(r.output_diff),
                r.mean,
                r.stderr,
                r.keys_tested,
                r.seed
            ),
        },
    }
}

pub fn report(b: &ReportBundle, fmt: Format) -> String {
    match fmt {
        Format::Json => to_json(b),
        Format::Csv => {
            let mut out = String::from("rounds,max_count,expected,matches\n");
            for r in &b.table2.rows {
                let expected = r.expected.map(|p| p.to_string()).unwrap_or_default();
                let matches = r.matches.map(|m| m.to_string()).unwrap_or_default();
                writeln!(out, "{},{},{expected},{matches}", r.rounds, r.measured).unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = format!("{} ({} {})\n\nS-boxes\n", b.description_name, b.format, b.tool_version);
            for s in &b.table1 {
                writeln!(out, "  {} {}  uniformity {}  max p {}", s.id, s.table, s.uniformity, s.max_diff_prob).unwrap();
            }
            out.push_str("\nmax D(a,b) per round count\n");
            for r in &b.table2.rows {
                let expected = r.expected.map(|p| format!("  (reference {p})")).unwrap_or_default();
                writeln!(out, "  {}  {}{expected}", r.rounds, r.measured).unwrap();
            }
            writeln!(
                out,
                "  non-increasing: {}, saturation: {:?}, verdict: {}",
                b.table2.non_increasing, b.table2.saturation_round, b.table2.verdict
            )
            .unwrap();
            writeln!(out, "\ncharacteristics at {} rounds (max {})", b.table3.rounds, b.table3.max_count).unwrap();
            for c in &b.table3.expected {
                writeln!(
                    out,
                    "  {} -> {}  count {}  direct {}  in top set: {}",
                    c.a_hex, c.b_hex, c.count, c.verified_count, c.in_top_set
                )
                .unwrap();
            }
            writeln!(out, "  verdict: {}", b.table3.verdict).unwrap();
            out.push_str("\ntrail bounds\n");
            for r in &b.theorem.bounds {
                writeln!(
                    out,
                    "  {} rounds: min active {}, best trail {}, active bound {}",
                    r.rounds, r.min_active, r.best_trail_prob, r.active_bound
                )
                .unwrap();
            }
            writeln!(out, "  cipher bound {}, 25-round analogy {}", b.theorem.cipher_bound, b.theorem.present_bound)
                .unwrap();
            out
        }
    }
}
