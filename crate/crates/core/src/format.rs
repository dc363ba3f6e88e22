//! The line-oriented sequence file format.
//!
//! ```text
//! # comment
//! alphabet A = a b c
//! morphism theta : A -> A length 3
//!   a -> a b a
//!   b -> b a c
//!   c -> b a b
//! end
//! sequence S = prefix [tau] cycle [theta]
//! ```
//!
//! Symbols are whitespace-separated strings, so multi-character names (coded
//! pure-base letters, sliding-block windows) need no escaping. `#` starts a
//! comment anywhere in a line.

use crate::alphabet::Alphabet;
use crate::directive::DirectiveSequence;
use crate::morphism::Morphism;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// A parsed file: named alphabets, morphisms and directive sequences.
#[derive(Debug, Clone)]
pub struct SequenceFile {
    pub alphabets: Vec<(String, Alphabet)>,
    pub morphisms: Vec<(String, Morphism)>,
    pub sequences: Vec<(String, DirectiveSequence)>,
}

impl SequenceFile {
    pub fn alphabet(&self, name: &str) -> Option<&Alphabet> {
        self.alphabets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| a)
    }

    pub fn morphism(&self, name: &str) -> Option<&Morphism> {
        self.morphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    /// The named sequence, or the unique one when no name is given.
    pub fn sequence(&self, name: Option<&str>) -> Result<&DirectiveSequence, String> {
        match name {
            Some(n) => self
                .sequences
                .iter()
                .find(|(name, _)| name == n)
                .map(|(_, s)| s)
                .ok_or_else(|| format!("no sequence named `{n}` in the file")),
            None => match self.sequences.as_slice() {
                [] => Err("the file defines no sequence".into()),
                [(_, s)] => Ok(s),
                many => Err(format!(
                    "the file defines {} sequences ({}); pick one with --sequence",
                    many.len(),
                    many.iter()
                        .map(|(n, _)| n.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                )),
            },
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse(text: &str) -> Result<SequenceFile, ParseError> {
    let mut file = SequenceFile {
        alphabets: vec![],
        morphisms: vec![],
        sequences: vec![],
    };
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0usize;
    while i < lines.len() {
        let lineno = i + 1;
        let line = strip_comment(lines[i]).trim();
        i += 1;
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "alphabet" => parse_alphabet(&mut file, &tokens, lineno)?,
            "morphism" => i = parse_morphism(&mut file, &lines, i - 1)?,
            "sequence" => parse_sequence(&mut file, line, lineno)?,
            other => return err(lineno, format!("unknown directive `{other}`")),
        }
    }
    Ok(file)
}

fn parse_alphabet(
    file: &mut SequenceFile,
    tokens: &[&str],
    lineno: usize,
) -> Result<(), ParseError> {
    if tokens.len() < 4 || tokens[2] != "=" {
        return err(lineno, "expected `alphabet NAME = sym sym ...`");
    }
    let name = tokens[1].to_string();
    if file.alphabet(&name).is_some() {
        return err(lineno, format!("alphabet `{name}` already defined"));
    }
    match Alphabet::new(tokens[3..].iter().map(|s| s.to_string())) {
        Ok(a) => {
            file.alphabets.push((name, a));
            Ok(())
        }
        Err(e) => err(lineno, e.to_string()),
    }
}

/// Parse `morphism NAME : SRC -> TGT length N` plus its image lines up to
/// `end`. Returns the index one past the `end` line.
fn parse_morphism(
    file: &mut SequenceFile,
    lines: &[&str],
    header_idx: usize,
) -> Result<usize, ParseError> {
    let lineno = header_idx + 1;
    let tokens: Vec<&str> = strip_comment(lines[header_idx]).split_whitespace().collect();
    if tokens.len() != 8
        || tokens[2] != ":"
        || tokens[4] != "->"
        || tokens[6] != "length"
    {
        return err(
            lineno,
            "expected `morphism NAME : SRC -> TGT length N`",
        );
    }
    let name = tokens[1].to_string();
    if file.morphism(&name).is_some() {
        return err(lineno, format!("morphism `{name}` already defined"));
    }
    let source = file
        .alphabet(tokens[3])
        .cloned()
        .ok_or(ParseError {
            line: lineno,
            message: format!("unknown alphabet `{}`", tokens[3]),
        })?;
    let target = file
        .alphabet(tokens[5])
        .cloned()
        .ok_or(ParseError {
            line: lineno,
            message: format!("unknown alphabet `{}`", tokens[5]),
        })?;
    let length: usize = tokens[7].parse().map_err(|_| ParseError {
        line: lineno,
        message: format!("invalid length `{}`", tokens[7]),
    })?;
    if length == 0 {
        return err(lineno, "length must be >= 1");
    }
    let mut images: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut i = header_idx + 1;
    loop {
        if i >= lines.len() {
            return err(lineno, format!("morphism `{name}` is missing its `end`"));
        }
        let body_lineno = i + 1;
        let body = strip_comment(lines[i]).trim();
        i += 1;
        if body.is_empty() {
            continue;
        }
        if body == "end" {
            break;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() < 3 || toks[1] != "->" {
            return err(body_lineno, "expected `sym -> sym sym ...`");
        }
        let a = source.id_of(toks[0]).map_err(|e| ParseError {
            line: body_lineno,
            message: e.to_string(),
        })?;
        if images.contains_key(&a) {
            return err(body_lineno, format!("image of `{}` already given", toks[0]));
        }
        let image: Result<Vec<u32>, ParseError> = toks[2..]
            .iter()
            .map(|s| {
                target.id_of(s).map_err(|e| ParseError {
                    line: body_lineno,
                    message: e.to_string(),
                })
            })
            .collect();
        let image = image?;
        if image.len() != length {
            return err(
                body_lineno,
                format!(
                    "image of `{}` has {} symbols, the declared length is {length}",
                    toks[0],
                    image.len()
                ),
            );
        }
        images.insert(a, image);
    }
    for a in source.ids() {
        if !images.contains_key(&a) {
            return err(
                lineno,
                format!("morphism `{name}` gives no image for `{}`", source.name(a)),
            );
        }
    }
    let images: Vec<Vec<u32>> = images.into_values().collect();
    match Morphism::new(source, target, images) {
        Ok(m) => {
            file.morphisms.push((name, m));
            Ok(i)
        }
        Err(e) => err(lineno, e.to_string()),
    }
}

fn parse_sequence(
    file: &mut SequenceFile,
    line: &str,
    lineno: usize,
) -> Result<(), ParseError> {
    let rest = line.trim_start_matches("sequence").trim();
    let (name, spec) = match rest.split_once('=') {
        Some((n, s)) => (n.trim().to_string(), s.trim()),
        None => return err(lineno, "expected `sequence NAME = prefix [..] cycle [..]`"),
    };
    if name.is_empty() || name.split_whitespace().count() != 1 {
        return err(lineno, "sequence name must be a single token");
    }
    if file.sequences.iter().any(|(n, _)| *n == name) {
        return err(lineno, format!("sequence `{name}` already defined"));
    }
    let normalized = spec.replace('[', " [ ").replace(']', " ] ");
    let toks: Vec<&str> = normalized.split_whitespace().collect();
    let mut pos = 0usize;
    let read_list = |pos: &mut usize, kw: &str| -> Result<Vec<String>, ParseError> {
        if toks.get(*pos).copied() != Some(kw) {
            return err(lineno, format!("expected `{kw} [...]`"));
        }
        *pos += 1;
        if toks.get(*pos).copied() != Some("[") {
            return err(lineno, format!("expected `[` after `{kw}`"));
        }
        *pos += 1;
        let mut names = Vec::new();
        while let Some(&t) = toks.get(*pos) {
            *pos += 1;
            if t == "]" {
                return Ok(names);
            }
            names.push(t.to_string());
        }
        err(lineno, format!("unterminated `{kw}` list"))
    };
    let prefix_names = read_list(&mut pos, "prefix")?;
    let cycle_names = read_list(&mut pos, "cycle")?;
    if pos != toks.len() {
        return err(lineno, "trailing tokens after the cycle list");
    }
    let resolve = |names: &[String]| -> Result<Vec<Morphism>, ParseError> {
        names
            .iter()
            .map(|n| {
                file.morphism(n).cloned().ok_or(ParseError {
                    line: lineno,
                    message: format!("unknown morphism `{n}`"),
                })
            })
            .collect()
    };
    let prefix = resolve(&prefix_names)?;
    let cycle = resolve(&cycle_names)?;
    match DirectiveSequence::new(prefix, cycle) {
        Ok(ds) => {
            file.sequences.push((name, ds));
            Ok(())
        }
        Err(e) => err(lineno, e.to_string()),
    }
}

/// Serialize a directive sequence as a parseable file. Alphabets and
/// morphisms are deduplicated by value and given generated names.
pub fn render_sequence(name: &str, ds: &DirectiveSequence) -> String {
    let mut alphabets: Vec<Alphabet> = Vec::new();
    let alpha_name = |a: &Alphabet, alphabets: &mut Vec<Alphabet>| -> String {
        match alphabets.iter().position(|x| x == a) {
            Some(i) => format!("A{i}"),
            None => {
                alphabets.push(a.clone());
                format!("A{}", alphabets.len() - 1)
            }
        }
    };
    let mut morphisms: Vec<Morphism> = Vec::new();
    let mut morphism_names: Vec<String> = Vec::new();
    let mut body = String::new();
    let name_of = |m: &Morphism,
                       morphisms: &mut Vec<Morphism>,
                       morphism_names: &mut Vec<String>,
                       alphabets: &mut Vec<Alphabet>,
                       body: &mut String|
     -> String {
        if let Some(i) = morphisms.iter().position(|x| x == m) {
            return morphism_names[i].clone();
        }
        let src = alpha_name(m.source(), alphabets);
        let tgt = alpha_name(m.target(), alphabets);
        let mname = format!("m{}", morphisms.len());
        let _ = writeln!(
            body,
            "morphism {mname} : {src} -> {tgt} length {}",
            m.length()
        );
        for a in m.source().ids() {
            let _ = writeln!(
                body,
                "  {} -> {}",
                m.source().name(a),
                m.target().render_word(m.image(a))
            );
        }
        let _ = writeln!(body, "end");
        morphisms.push(m.clone());
        morphism_names.push(mname.clone());
        mname
    };
    let prefix_names: Vec<String> = ds
        .prefix()
        .iter()
        .map(|m| name_of(m, &mut morphisms, &mut morphism_names, &mut alphabets, &mut body))
        .collect();
    let cycle_names: Vec<String> = ds
        .cycle()
        .iter()
        .map(|m| name_of(m, &mut morphisms, &mut morphism_names, &mut alphabets, &mut body))
        .collect();
    let mut out = String::new();
    for (i, a) in alphabets.iter().enumerate() {
        let _ = writeln!(out, "alphabet A{i} = {}", a.symbols().join(" "));
    }
    out.push_str(&body);
    let _ = writeln!(
        out,
        "sequence {name} = prefix [{}] cycle [{}]",
        prefix_names.join(" "),
        cycle_names.join(" ")
    );
    out
}
