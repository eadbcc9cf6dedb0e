//! Line-oriented cipher description files.
//!
//! ```text
//! # comment
//! name toy
//! blockbits 16
//! sbox s1 1FB2035869C7DAE4
//! rounds 4
//! round
//!   key 0
//!   sub s1 s1 s1 s1
//!   perm 15 11 7 3 14 10 6 2 13 9 5 1 12 8 4 0
//!   rotl 3
//!   xorconst 00FF
//! end
//! ```

use std::fmt::Write;

use crate::cipher::{CipherDescription, LayerSpec};
use crate::error::{ParseError, ParseErrorKind};
use crate::sbox::{hex_table, SBox4};

pub fn parse_description(text: &str) -> Result<CipherDescription, ParseError> {
    let mut name = None;
    let mut rounds = None;
    let mut sboxes: Vec<SBox4> = Vec::new();
    let mut template: Option<Vec<LayerSpec>> = None;
    // (line of `round`, layers so far, line of each layer)
    let mut open: Option<(usize, Vec<LayerSpec>, Vec<usize>)> = None;
    let mut layer_lines = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().unwrap();
        let args: Vec<&str> = words.collect();

        if let Some((_, layers, lines)) = open.as_mut() {
            if keyword == "end" {
                expect_args(line, keyword, &args, 0)?;
                let (_, layers, lines) = open.take().unwrap();
                template = Some(layers);
                layer_lines = lines;
                continue;
            }
            layers.push(parse_layer(line, keyword, &args)?);
            lines.push(line);
            continue;
        }

        match keyword {
            "name" => {
                expect_args(line, keyword, &args, 1)?;
                set_once(line, keyword, &mut name, args[0].to_string())?;
            }
            "blockbits" => {
                expect_args(line, keyword, &args, 1)?;
                let bits: u32 = parse_int(line, args[0])?;
                if bits != 16 {
                    return Err(ParseError::new(line, ParseErrorKind::BlockBits(bits)));
                }
            }
            "sbox" => {
                expect_args(line, keyword, &args, 2)?;
                let id = args[0];
                if sboxes.iter().any(|s| s.id() == id) {
                    return Err(ParseError::syntax(line, format!("S-box `{id}` declared twice")));
                }
                let table = hex_table(args[1]).ok_or_else(|| {
                    ParseError::syntax(line, format!("S-box `{id}` needs exactly 16 hex digits"))
                })?;
                let s = SBox4::new(id, table).ok_or_else(|| {
                    ParseError::new(line, ParseErrorKind::SboxNotPermutation(id.to_string()))
                })?;
                sboxes.push(s);
            }
            "rounds" => {
                expect_args(line, keyword, &args, 1)?;
                let n: usize = parse_int(line, args[0])?;
                set_once(line, keyword, &mut rounds, n)?;
            }
            "round" => {
                expect_args(line, keyword, &args, 0)?;
                if template.is_some() {
                    return Err(ParseError::syntax(line, "only one `round` block is allowed"));
                }
                open = Some((line, Vec::new(), Vec::new()));
            }
            "end" => return Err(ParseError::syntax(line, "`end` without `round`")),
            other => return Err(ParseError::syntax(line, format!("unknown directive `{other}`"))),
        }
    }

    if let Some((start, _, _)) = open {
        return Err(ParseError::syntax(start, "`round` block not closed with `end`"));
    }
    let last = text.lines().count().max(1);
    let name = name.ok_or_else(|| ParseError::syntax(last, "missing `name`"))?;
    let rounds = rounds.ok_or_else(|| ParseError::syntax(last, "missing `rounds`"))?;
    let template = template.unwrap_or_default();

    // attribute semantic errors to the offending layer line
    for (layer, &line) in template.iter().zip(&layer_lines) {
        if let Err(e) = CipherDescription::new("", sboxes.iter().cloned(), vec![layer.clone()], 1)
        {
            if !matches!(e.kind, ParseErrorKind::Syntax(_)) {
                return Err(ParseError::new(line, e.kind));
            }
        }
    }
    CipherDescription::new(name, sboxes, template, rounds).map_err(|e| ParseError::new(last, e.kind))
}

fn expect_args(line: usize, keyword: &str, args: &[&str], n: usize) -> Result<(), ParseError> {
    if args.len() != n {
        return Err(ParseError::syntax(
            line,
            format!("`{keyword}` takes {n} argument(s), got {}", args.len()),
        ));
    }
    Ok(())
}

fn set_once<T>(line: usize, keyword: &str, slot: &mut Option<T>, value: T) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(ParseError::syntax(line, format!("`{keyword}` given twice")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_int<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| ParseError::syntax(line, format!("expected a nonnegative integer, got `{s}`")))
}

fn parse_layer(line: usize, keyword: &str, args: &[&str]) -> Result<LayerSpec, ParseError> {
    Ok(match keyword {
        "sub" => {
            expect_args(line, keyword, args, 4)?;
            LayerSpec::Sub([0, 1, 2, 3].map(|i| args[i].to_string()))
        }
        "perm" => {
            expect_args(line, keyword, args, 16)?;
            let mut p = [0u8; 16];
            for (slot, a) in p.iter_mut().zip(args) {
                let v: u32 = parse_int(line, a)?;
                if v > 15 {
                    return Err(ParseError::new(line, ParseErrorKind::PermNotPermutation));
                }
                *slot = v as u8;
            }
            LayerSpec::Perm(p)
        }
        "rotl" => {
            expect_args(line, keyword, args, 1)?;
            LayerSpec::RotL(parse_int(line, args[0])?)
        }
        "xorconst" => {
            expect_args(line, keyword, args, 1)?;
            let a = args[0];
            if a.len() != 4 {
                return Err(ParseError::syntax(line, "`xorconst` takes 4 hex digits"));
            }
            let c = u16::from_str_radix(a, 16)
                .map_err(|_| ParseError::syntax(line, "`xorconst` takes 4 hex digits"))?;
            LayerSpec::XorConst(c)
        }
        "key" => {
            expect_args(line, keyword, args, 1)?;
            LayerSpec::KeyXor(parse_int(line, args[0])?)
        }
        other => return Err(ParseError::syntax(line, format!("unknown layer `{other}`"))),
    })
}

/// Canonical text form; parses back to an equal description.
pub fn format_description(desc: &CipherDescription) -> String {
    let mut out = String::new();
    writeln!(out, "name {}", desc.name()).unwrap();
    writeln!(out, "blockbits 16").unwrap();
    for s in desc.sboxes() {
        writeln!(out, "sbox {} {}", s.id(), s.to_hex()).unwrap();
    }
    writeln!(out, "rounds {}", desc.rounds()).unwrap();
    out.push_str("round\n");
    for layer in desc.template() {
        let body = match layer {
            LayerSpec::Sub(ids) => format!("sub {}", ids.join(" ")),
            LayerSpec::Perm(p) => {
                let idx: Vec<String> = p.iter().map(u8::to_string).collect();
                format!("perm {}", idx.join(" "))
            }
            LayerSpec::RotL(r) => format!("rotl {r}"),
            LayerSpec::XorConst(c) => format!("xorconst {c:04X}"),
            LayerSpec::KeyXor(slot) => format!("key {slot}"),
        };
        writeln!(out, "  {body}").unwrap();
    }
    out.push_str("end\n");
    out
}
