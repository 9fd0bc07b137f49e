//! Rules file format.
//!
//! ```text
//! # abstract space with explicit rules
//! space a b c
//! rule {} -> a
//! rule {a,b} -> c
//! ```
//!
//! ```text
//! # schematic system over grounded sets of rank ≤ 3
//! store rank<=3 card<=2
//! schema successor
//! schema union
//! ```

use super::{AbstractSystem, Schema, StoreSystem};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RulesParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown object `{name}`")]
    UnknownObject { line: usize, name: String },
    #[error("rules file declares no `space` or `store` line")]
    NoSpace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleFile {
    Abstract(AbstractSystem),
    Store(StoreSystem),
}

pub fn parse_rules_file(text: &str) -> Result<RuleFile, RulesParseError> {
    enum Mode {
        Unset,
        Abstract { labels: Vec<String>, rules: Vec<(u64, usize)> },
        Store(StoreSystem),
    }
    let mut mode = Mode::Unset;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let syntax = |msg: String| RulesParseError::Syntax { line: lineno, msg };
        let mut it = line.split_whitespace();
        match it.next().unwrap() {
            "space" => {
                if !matches!(mode, Mode::Unset) {
                    return Err(syntax("duplicate space/store declaration".into()));
                }
                let labels: Vec<String> = it.map(str::to_string).collect();
                if labels.is_empty() || labels.len() > 16 {
                    return Err(syntax("space needs between 1 and 16 objects".into()));
                }
                mode = Mode::Abstract {
                    labels,
                    rules: Vec::new(),
                };
            }
            "store" => {
                if !matches!(mode, Mode::Unset) {
                    return Err(syntax("duplicate space/store declaration".into()));
                }
                let mut rank_budget = None;
                let mut card_budget = 2usize;
                for opt in it.by_ref() {
                    if let Some(v) = opt.strip_prefix("rank<=") {
                        rank_budget = Some(v.parse::<u32>().map_err(|_| syntax(format!("bad rank budget `{v}`")))?);
                    } else if let Some(v) = opt.strip_prefix("card<=") {
                        card_budget = v.parse::<usize>().map_err(|_| syntax(format!("bad card budget `{v}`")))?;
                    } else {
                        return Err(syntax(format!("unknown store option `{opt}`")));
                    }
                }
                let rank_budget = rank_budget.ok_or_else(|| syntax("store line needs rank<=K".into()))?;
                mode = Mode::Store(StoreSystem {
                    schemas: Vec::new(),
                    rank_budget,
                    card_budget,
                });
            }
            "rule" => {
                let Mode::Abstract { labels, rules } = &mut mode else {
                    return Err(syntax("`rule` lines need a `space` declaration".into()));
                };
                // rule {a,b} -> c
                let rest: String = it.collect::<Vec<_>>().join(" ");
                let (premise_part, conclusion_part) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax("rule needs `premise -> conclusion`".into()))?;
                let premise_part = premise_part.trim();
                if !premise_part.starts_with('{') || !premise_part.ends_with('}') {
                    return Err(syntax("premise must be written {a,b} or {}".into()));
                }
                let inner = &premise_part[1..premise_part.len() - 1];
                let mut premise = 0u64;
                for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let idx = labels.iter().position(|l| l == name).ok_or(RulesParseError::UnknownObject {
                        line: lineno,
                        name: name.to_string(),
                    })?;
                    premise |= 1 << idx;
                }
                let cname = conclusion_part.trim();
                let conclusion = labels.iter().position(|l| l == cname).ok_or(RulesParseError::UnknownObject {
                    line: lineno,
                    name: cname.to_string(),
                })?;
                rules.push((premise, conclusion));
            }
            "schema" => {
                let Mode::Store(sys) = &mut mode else {
                    return Err(syntax("`schema` lines need a `store` declaration".into()));
                };
                let name = it.next().ok_or_else(|| syntax("missing schema name".into()))?;
                let schema = Schema::from_name(name).ok_or_else(|| syntax(format!("unknown schema `{name}`")))?;
                if !sys.schemas.contains(&schema) {
                    sys.schemas.push(schema);
                }
            }
            other => return Err(syntax(format!("unknown declaration `{other}`"))),
        }
    }
    match mode {
        Mode::Unset => Err(RulesParseError::NoSpace),
        Mode::Abstract { labels, rules } => Ok(RuleFile::Abstract(AbstractSystem::new(labels, rules))),
        Mode::Store(sys) => Ok(RuleFile::Store(sys)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_abstract_file() {
        let f = parse_rules_file("# demo\nspace a b c\nrule {} -> a\nrule {a, b} -> c\n").unwrap();
        let RuleFile::Abstract(sys) = f else { panic!() };
        assert_eq!(sys.labels, vec!["a", "b", "c"]);
        assert_eq!(sys.rules, vec![(0, 0), (0b011, 2)]);
    }

    #[test]
    fn parses_store_file() {
        let f = parse_rules_file("store rank<=3 card<=2\nschema successor\nschema union\n").unwrap();
        let RuleFile::Store(sys) = f else { panic!() };
        assert_eq!(sys.rank_budget, 3);
        assert_eq!(sys.card_budget, 2);
        assert_eq!(sys.schemas, vec![Schema::Successor, Schema::Union]);
    }

    #[test]
    fn rejects_malformed_files() {
        assert_eq!(parse_rules_file(""), Err(RulesParseError::NoSpace));
        assert!(matches!(
            parse_rules_file("rule {} -> a\n"),
            Err(RulesParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_rules_file("space a\nrule {q} -> a\n"),
            Err(RulesParseError::UnknownObject { line: 2, .. })
        ));
        assert!(matches!(
            parse_rules_file("store rank<=2\nschema frobnicate\n"),
            Err(RulesParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_rules_file("store card<=2\n"),
            Err(RulesParseError::Syntax { line: 1, .. })
        ));
    }
}
