//! Extensional system files.
//!
//! ```text
//! universe a b c      # optional, may repeat
//! axiom a
//! rule b <- a
//! coaxiom c
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use coax::{Error, InferenceSystem, Judgement, Result, Rule, SystemBuilder, Universe};

/// A judgement token and where it appeared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub judgement: Judgement,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemFile {
    /// `None` when no `universe` line was given.
    pub universe: Option<Vec<Located>>,
    /// Distinct rules in file order, axioms included, with their line numbers.
    pub rules: Vec<(Rule, usize)>,
    pub coaxioms: Vec<Located>,
    pub warnings: Vec<String>,
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, i)),
            (true, Some((sc, si))) => {
                out.push((sc, &line[si..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((sc, si)) = start {
        out.push((sc, &line[si..]));
    }
    out
}

fn parse_error(line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: msg.into(),
    }
}

fn judgement(line: usize, (column, tok): (usize, &str)) -> Result<Located> {
    if tok == "<-" {
        return Err(parse_error(line, column, "`<-` is not a judgement"));
    }
    Ok(Located {
        judgement: Judgement::new(tok),
        line,
        column,
    })
}

pub fn parse_system_file(text: &str) -> Result<SystemFile> {
    let mut file = SystemFile::default();
    let mut seen_rules: HashMap<(Judgement, BTreeSet<Judgement>), usize> = HashMap::new();
    let mut seen_coaxioms: HashMap<Judgement, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks = tokens(raw);
        let Some(&(kw_col, kw)) = toks.first() else { continue };
        let args = &toks[1..];
        let single = |what: &str| -> Result<Located> {
            match args {
                [one] => judgement(ln, *one),
                [] => Err(parse_error(ln, kw_col + kw.len(), format!("`{what}` needs a judgement"))),
                [_, extra, ..] => Err(parse_error(ln, extra.0, format!("`{what}` takes exactly one judgement"))),
            }
        };
        match kw {
            "universe" => {
                let js = args.iter().map(|&t| judgement(ln, t)).collect::<Result<Vec<_>>>()?;
                file.universe.get_or_insert_with(Vec::new).extend(js);
            }
            "axiom" | "rule" => {
                let rule = if kw == "axiom" {
                    Rule::axiom(single("axiom")?.judgement)
                } else {
                    let Some(arrow) = args.iter().position(|&(_, t)| t == "<-") else {
                        return Err(parse_error(ln, kw_col, "expected `rule <conclusion> <- <premises>`"));
                    };
                    if arrow != 1 {
                        let col = args.get(1).map_or(kw_col + kw.len(), |t| t.0);
                        return Err(parse_error(ln, col, "a rule has exactly one conclusion before `<-`"));
                    }
                    let ps = args[2..].iter().map(|&t| judgement(ln, t)).collect::<Result<Vec<_>>>()?;
                    Rule::new(ps.into_iter().map(|l| l.judgement), judgement(ln, args[0])?.judgement)
                };
                let key = (rule.conclusion.clone(), rule.premises.clone());
                if let Some(first) = seen_rules.get(&key) {
                    file.warnings
                        .push(format!("line {ln}: duplicate rule `{rule}` (first on line {first}) ignored"));
                } else {
                    seen_rules.insert(key, ln);
                    file.rules.push((rule, ln));
                }
            }
            "coaxiom" => {
                let c = single("coaxiom")?;
                if let Some(first) = seen_coaxioms.get(&c.judgement) {
                    file.warnings.push(format!(
                        "line {ln}: duplicate coaxiom `{}` (first on line {first}) ignored",
                        c.judgement
                    ));
                } else {
                    seen_coaxioms.insert(c.judgement.clone(), ln);
                    file.coaxioms.push(c);
                }
            }
            other => {
                return Err(parse_error(ln, kw_col, format!("unknown keyword `{other}`")));
            }
        }
    }
    Ok(file)
}

impl SystemFile {
    /// Builds the system; with a declared universe every mentioned judgement
    /// must belong to it.
    pub fn to_system(&self) -> Result<InferenceSystem> {
        let mut b = SystemBuilder::new();
        for (r, _) in &self.rules {
            b.rule(r.clone());
        }
        for c in &self.coaxioms {
            b.coaxiom(c.judgement.clone());
        }
        let Some(declared) = &self.universe else {
            return Ok(b.build());
        };
        let universe = Universe::new(declared.iter().map(|l| l.judgement.clone()));
        let outside = |j: &Judgement| !universe.contains(j.as_str());
        for (r, ln) in &self.rules {
            if let Some(j) = r.premises.iter().chain([&r.conclusion]).find(|j| outside(j)) {
                return Err(parse_error(*ln, 1, format!("`{j}` is not in the declared universe")));
            }
        }
        if let Some(c) = self.coaxioms.iter().find(|c| outside(&c.judgement)) {
            return Err(parse_error(
                c.line,
                c.column,
                format!("`{}` is not in the declared universe", c.judgement),
            ));
        }
        Ok(b.build_with_universe(Arc::new(universe))?.0)
    }
}

/// Writes `sys` so that parsing the text rebuilds the same system.
pub fn emit_system(sys: &InferenceSystem) -> String {
    let mut out = String::new();
    for chunk in sys.universe().members().chunks(8) {
        out.push_str("universe");
        for j in chunk {
            write!(out, " {j}").unwrap();
        }
        out.push('\n');
    }
    for r in sys.rules() {
        if r.is_axiom() {
            writeln!(out, "axiom {}", r.conclusion).unwrap();
        } else {
            writeln!(out, "rule {r}").unwrap();
        }
    }
    for c in sys.coaxioms().judgements() {
        writeln!(out, "coaxiom {c}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_axiom() {
        let f = parse_system_file("axiom a\n").unwrap();
        let sys = f.to_system().unwrap();
        assert_eq!(sys.universe().len(), 1);
        assert_eq!(sys.rule_count(), 1);
        assert!(f.warnings.is_empty());
    }

    #[test]
    fn comments_and_columns() {
        let f = parse_system_file("# header\nrule b <- a # trailing\n\n  coaxiom a\n").unwrap();
        assert_eq!(f.rules.len(), 1);
        assert_eq!(f.coaxioms[0].line, 4);
        assert_eq!(f.coaxioms[0].column, 11);
    }

    #[test]
    fn malformed_lines_report_position() {
        let cases = [
            ("axiom a\nfoo b\n", 2, 1),
            ("rule a b\n", 1, 1),
            ("rule a b <- c\n", 1, 8),
            ("axiom\n", 1, 6),
            ("coaxiom a b\n", 1, 11),
            ("rule a <- <-\n", 1, 11),
        ];
        for (text, line, column) in cases {
            match parse_system_file(text) {
                Err(Error::Parse { line: l, column: c, .. }) => assert_eq!((l, c), (line, column), "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn declared_universe_is_enforced() {
        let f = parse_system_file("universe a b\naxiom a\ncoaxiom c\n").unwrap();
        assert!(matches!(f.to_system(), Err(Error::Parse { line: 3, column: 9, .. })));
        let f = parse_system_file("universe a b\naxiom a\n").unwrap();
        assert_eq!(f.to_system().unwrap().universe().len(), 2);
        let f = parse_system_file("universe\n").unwrap();
        assert_eq!(f.to_system().unwrap().universe().len(), 0);
    }

    #[test]
    fn duplicates_warn() {
        let f = parse_system_file("rule a <- b c\nrule a <- c b\ncoaxiom b\ncoaxiom b\n").unwrap();
        assert_eq!(f.rules.len(), 1);
        assert_eq!(f.warnings.len(), 2);
        assert!(f.warnings[0].contains("line 2"));
    }
}
