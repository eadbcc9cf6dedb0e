//! Acceptance criteria, one PASS/FAIL line each. Runs under `cargo test`
//! with its own harness; exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{heys_encrypt, load, naive_threshold, TrailOracle, DESCRIPTIONS};
use diffspn::exhaustive::with_workers;
use diffspn::report::{emit_table2, table2_verdict, table3, EXPECTED_CHARACTERISTICS};
use diffspn::trail::{max_sbox_prob, trail_sum_probability};
use diffspn::{
    best_trail, cipher_bound, compute_ddt, diff_count, format_nibbles, max_diff_prob, min_active_sboxes,
    parse_difference, scan_max, theorem_lower_bound, top_characteristics, verify_exhaustive, verify_keyed,
    LayerSpec, Prob, SBox4,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t <= limit, "{what} took {t:.1?}, limit {limit:?}");
    Ok(t)
}

fn sbox_suite() -> Outcome {
    let start = Instant::now();
    let tables = ["1FB2035869C7DAE4", "6AF4ED9217CB0358", "C261035879BEADF4", "DB2703586CF1A49E"];
    for (i, hex) in tables.iter().enumerate() {
        let s = SBox4::from_hex(format!("s{}", i + 1), hex).ok_or(format!("s{} is not a bijection", i + 1))?;
        let ddt = compute_ddt(&s);
        for a in 0..16u8 {
            let row: Vec<u32> = (0..16u8).map(|b| ddt.get(a, b)).collect();
            ensure!(row.iter().sum::<u32>() == 16, "s{} row {a} does not sum to 16", i + 1);
            ensure!(row.iter().all(|c| c % 2 == 0), "s{} row {a} has an odd entry", i + 1);
        }
        ensure!(ddt.uniformity() == 4, "s{} uniformity {}", i + 1, ddt.uniformity());
        ensure!(max_diff_prob(&ddt) == Prob::new(1, 2), "s{} max prob {}", i + 1, max_diff_prob(&ddt));
    }
    let t = within(Duration::from_secs(1), start, "S-box suite")?;
    Ok(format!("4 bijections, uniformity 4, max probability 2^-2 ({t:.1?})"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let desc = load("toy-heys.cd");
    let key = desc.zero_key();
    let threshold = 64;
    let naive = naive_threshold(|x| heys_encrypt(x, 0, desc.rounds()), threshold);
    let max = naive.iter().map(|c| c.2).max().unwrap();
    let argmax: Vec<(u16, u16)> = naive.iter().filter(|c| c.2 == max).map(|c| (c.0, c.1)).collect();

    let dist = scan_max(&desc, &key, None, None).map_err(|e| e.to_string())?;
    ensure!(dist.max_count == max, "scan_max {} vs oracle {max}", dist.max_count);
    let got: Vec<(u16, u16)> = dist.argmax.iter().map(|c| (c.input_diff, c.output_diff)).collect();
    ensure!(got == argmax, "argmax {got:04X?} vs oracle {argmax:04X?}");
    let top = top_characteristics(&desc, &key, Some(threshold)).map_err(|e| e.to_string())?;
    let top: Vec<(u16, u16, u32)> = top.iter().map(|c| (c.input_diff, c.output_diff, c.count)).collect();
    ensure!(top == naive, "top_characteristics(>= {threshold}) differs from oracle");

    let mut summary = Vec::new();
    for rounds in 1..=3 {
        let oracle = TrailOracle::new(&desc, rounds);
        let m = min_active_sboxes(&desc, rounds).map_err(|e| e.to_string())?;
        ensure!(m == oracle.optimum_active(), "r={rounds} min active {m} vs {}", oracle.optimum_active());
        let t = best_trail(&desc, rounds).map_err(|e| e.to_string())?;
        let p = Prob::new(oracle.optimum_best() as u128, 16 * rounds as u32);
        ensure!(t.probability == p, "r={rounds} best {} vs {p}", t.probability);
        ensure!(t.round_diffs == oracle.best_trail_diffs(), "r={rounds} trail differs from oracle");
        summary.push(format!("r{rounds}: {m} active, {p}"));
    }
    let t = within(Duration::from_secs(120), start, "oracle equivalence")?;
    Ok(format!(
        "toy-heys max {max} on {} pairs, {} entries >= {threshold}; {} ({t:.1?})",
        argmax.len(),
        naive.len(),
        summary.join("; ")
    ))
}

fn theorem_arithmetic() -> Outcome {
    let start = Instant::now();
    let totals: Vec<u32> = (3..=5).map(|i| theorem_lower_bound(i).unwrap().total).collect();
    ensure!(totals == [10, 11, 12], "case totals {totals:?}");
    let q = Prob::new(1, 2).to_ratio();
    let full = Prob::from_ratio(&cipher_bound(10, 8, &q));
    ensure!(full == Some(Prob::new(1, 160)), "cipher bound {full:?}");
    let present = Prob::from_ratio(&cipher_bound(10, 5, &q));
    ensure!(present == Some(Prob::new(1, 100)), "analogy bound {present:?}");
    let t = within(Duration::from_secs(1), start, "theorem arithmetic")?;
    Ok(format!("cases 10/11/12, bounds 2^-160 and 2^-100 ({t:.1?})"))
}

fn block_maxima() -> Outcome {
    let start = Instant::now();
    let desc = load("separ-encblock-ref.cd");
    let key = desc.zero_key();
    let rows = with_workers(8, || emit_table2(&desc, &key, 4)).map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(600), start, "per-round maxima on 8 workers")?;
    let serial = with_workers(1, || emit_table2(&desc, &key, 4)).map_err(|e| e.to_string())?;
    ensure!(rows == serial, "rows differ between 8 workers and 1 worker");
    let v = table2_verdict(&rows);
    ensure!(v.non_increasing, "not non-increasing: {rows:?}");
    let detected = diffspn::report::saturation_round(&rows);
    ensure!(detected == v.saturation_round, "saturation detection inconsistent");
    let measured: Vec<String> = rows.iter().map(|r| r.max_count.to_string()).collect();
    Ok(format!(
        "non-increasing {}, saturation {:?}, deterministic ({t:.1?}); conditional match against 1016/84/22/22: {}",
        measured.join("/"),
        v.saturation_round,
        v.verdict.to_uppercase()
    ))
}

fn characteristics() -> Outcome {
    let desc = load("separ-encblock-ref.cd");
    let key = desc.zero_key();
    let nibbles = [
        "0000, 0100, 0010, 0100",
        "0000, 0100, 1001, 0100",
        "0000, 0111, 0000, 0100",
        "0000, 1011, 0010, 0100",
        "0000, 1011, 1001, 0100",
        "0000, 1110, 0000, 0100",
        "1100, 1100, 1000, 0000",
    ];
    let mut counts = Vec::new();
    for (&(a, b), text) in EXPECTED_CHARACTERISTICS.iter().zip(nibbles) {
        let parsed = parse_difference(text).map_err(|e| e.to_string())?;
        ensure!(parsed == a, "{text} parsed as {parsed:#06X}, expected {a:#06X}");
        ensure!(format_nibbles(a) == text, "{a:#06X} formats as {}", format_nibbles(a));
        ensure!(parse_difference(&format_nibbles(b)).ok() == Some(b), "{b:#06X} does not round-trip");
        let direct = verify_exhaustive(&desc, &key, a, b).map_err(|e| e.to_string())?.count();
        let book = diff_count(&desc, &key, a, b).map_err(|e| e.to_string())?;
        ensure!(direct == book, "{a:#06X}->{b:#06X}: direct {direct} vs codebook {book}");
        counts.push(direct);
    }
    let t3 = table3(&desc, &key).map_err(|e| e.to_string())?;
    let in_top = t3.expected.iter().filter(|p| p.in_top_set).count();
    Ok(format!(
        "7/7 agree (counts {counts:?}), notation round-trips; conditional match: {} ({in_top}/7 in measured top set of max {})",
        t3.verdict.to_uppercase(),
        t3.max_count
    ))
}

/// The bound uses each description's largest S-box probability. That is 2^-2
/// for every SEPAR S-box. The toy cipher's S-box reaches 2^-1, so the fixed
/// 2^-2 form is reported per description but asserted only where it applies.
fn consistency_bound() -> Outcome {
    let quarter = Prob::new(1, 2);
    let mut checked = 0;
    let mut literal_fails = Vec::new();
    for name in DESCRIPTIONS {
        let desc = load(name);
        let q = max_sbox_prob(&desc);
        for rounds in 1..=4 {
            let m = min_active_sboxes(&desc, rounds).map_err(|e| e.to_string())?;
            let t = best_trail(&desc, rounds).map_err(|e| e.to_string())?;
            ensure!(t.probability <= q.pow(m), "{name} r={rounds}: {} > ({q})^{m}", t.probability);
            if t.probability > quarter.pow(m) {
                ensure!(q > quarter, "{name} r={rounds}: {} > (2^-2)^{m}", t.probability);
                literal_fails.push(format!("{name} r={rounds}"));
            }
            let mut p = Prob::ONE;
            let subs: Vec<&LayerSpec> = desc.template().iter().filter(|l| !l.is_linear()).collect();
            for (k, step) in t.steps.iter().enumerate() {
                let LayerSpec::Sub(ids) = subs[k % subs.len()] else { unreachable!() };
                for n in 0..4 {
                    let a = ((step.input >> (12 - 4 * n)) & 0xF) as u8;
                    let b = ((step.output >> (12 - 4 * n)) & 0xF) as u8;
                    let c = compute_ddt(desc.sbox(&ids[n]).unwrap()).get(a, b);
                    let q = Prob::new(c as u128, 4);
                    ensure!(c > 0 && step.nibble_probs[n] == q, "{name} r={rounds}: bad nibble transition");
                    p = p.mul(q);
                }
            }
            ensure!(p == t.probability, "{name} r={rounds}: replay {p} vs {}", t.probability);
            checked += 1;
        }
    }
    let literal = if literal_fails.is_empty() {
        "holds everywhere".to_string()
    } else {
        format!("exceeded only where max S-box probability is 2^-1: {}", literal_fails.join(", "))
    };
    Ok(format!(
        "{checked} (description, rounds) cases within maxSboxProb^minActive and replayed; fixed (2^-2)^minActive {literal}"
    ))
}

fn markov() -> Outcome {
    let desc = load("toy-heys.cd").with_rounds(2);
    let t = best_trail(&desc, 2).map_err(|e| e.to_string())?;
    let (a, b) = (t.input_diff(), t.output_diff());
    let oracle = TrailOracle::new(&desc, 2);
    let sum = Prob::new(oracle.trail_sum(a, b), 32);
    ensure!(
        trail_sum_probability(&desc, 2, a, b).ok() == Some(sum),
        "library trail sum differs from enumeration"
    );
    let r = verify_keyed(&desc, a, b, 64, 1).map_err(|e| e.to_string())?;
    let p = r.mean / 65536.0;
    let dev = (p - sum.to_f64()).abs();
    let se = r.stderr / 65536.0;
    ensure!(dev <= 3.0 * se, "keyed {p} vs trail sum {sum}: deviation {dev:e} > 3 * {se:e}");
    Ok(format!("{a:#06X}->{b:#06X}: keyed mean {p} (se {se}), trail sum {sum}"))
}

fn performance() -> Outcome {
    let desc = load("separ-encblock-ref.cd");
    let key = desc.zero_key();
    let start = Instant::now();
    let parallel = with_workers(8, || scan_max(&desc, &key, Some(4), None)).map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(600), start, "4-round scan on 8 workers")?;
    let serial = with_workers(1, || scan_max(&desc, &key, Some(4), None)).map_err(|e| e.to_string())?;
    ensure!(
        format!("{parallel:?}") == format!("{serial:?}"),
        "8-worker and 1-worker results differ"
    );
    Ok(format!("4-round scan {t:.1?} on 8 workers, identical at 1 worker"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("S-box suite", sbox_suite),
        ("oracle equivalence", oracle_equivalence),
        ("theorem arithmetic", theorem_arithmetic),
        ("per-round block maxima", block_maxima),
        ("high-probability characteristics", characteristics),
        ("consistency bound", consistency_bound),
        ("Markov cross-check", markov),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
