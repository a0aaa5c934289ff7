//! Context-free grammars in Greibach normal form.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ModelError;
use crate::symbol::{Symbol, Word};

/// A rule `lhs → head tail`, with `head` a terminal and `tail` nonterminals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GnfRule {
    pub lhs: Symbol,
    pub head: Symbol,
    pub tail: Vec<Symbol>,
}

impl fmt::Display for GnfRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.head)?;
        for x in &self.tail {
            write!(f, " {x}")?;
        }
        Ok(())
    }
}

/// A grammar whose rules are numbered from 1 in list order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GnfGrammar {
    name: String,
    nonterminals: Vec<Symbol>,
    terminals: Vec<Symbol>,
    start: Symbol,
    rules: Vec<GnfRule>,
}

impl GnfGrammar {
    pub fn new(
        name: &str,
        nonterminals: Vec<Symbol>,
        terminals: Vec<Symbol>,
        start: Symbol,
        rules: Vec<GnfRule>,
    ) -> Result<GnfGrammar, ModelError> {
        let err = |m: String| Err(ModelError::Grammar(m));
        if let Some(x) = nonterminals.iter().find(|x| terminals.contains(x)) {
            return err(format!("{x} is both terminal and nonterminal"));
        }
        for (what, list) in [("nonterminal", &nonterminals), ("terminal", &terminals)] {
            let set: BTreeSet<_> = list.iter().collect();
            if set.len() != list.len() {
                return err(format!("duplicate {what}"));
            }
        }
        if !nonterminals.contains(&start) {
            return err(format!("start symbol {start} is not a nonterminal"));
        }
        if rules.is_empty() {
            return err("no rules".into());
        }
        for (i, r) in rules.iter().enumerate() {
            if !nonterminals.contains(&r.lhs) {
                return err(format!("rule {}: {} is not a nonterminal", i + 1, r.lhs));
            }
            if !terminals.contains(&r.head) {
                return err(format!("rule {}: {} is not a terminal", i + 1, r.head));
            }
            if let Some(x) = r.tail.iter().find(|x| !nonterminals.contains(x)) {
                return err(format!("rule {}: {x} is not a nonterminal", i + 1));
            }
        }
        Ok(GnfGrammar { name: name.to_string(), nonterminals, terminals, start, rules })
    }

    /// Builds a grammar from `(lhs, head, tail)` literals, panicking on errors.
    pub fn from_literals(name: &str, start: &str, rules: &[(&str, &str, &[&str])]) -> GnfGrammar {
        let sym = |t: &str| Symbol::new(t).unwrap_or_else(|e| panic!("{e}"));
        let mut nts: Vec<Symbol> = vec![sym(start)];
        let mut ts: Vec<Symbol> = Vec::new();
        let mut rs = Vec::new();
        for (lhs, head, tail) in rules {
            for x in std::iter::once(lhs).chain(tail.iter()) {
                if !nts.contains(&sym(x)) {
                    nts.push(sym(x));
                }
            }
            if !ts.contains(&sym(head)) {
                ts.push(sym(head));
            }
            rs.push(GnfRule { lhs: sym(lhs), head: sym(head), tail: tail.iter().map(|x| sym(x)).collect() });
        }
        GnfGrammar::new(name, nts, ts, sym(start), rs).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[Symbol] {
        &self.terminals
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    pub fn rules(&self) -> &[GnfRule] {
        &self.rules
    }

    /// Rule `i`, numbered from 1.
    pub fn rule(&self, i: usize) -> Option<&GnfRule> {
        i.checked_sub(1).and_then(|i| self.rules.get(i))
    }

    /// Decides `word ∈ L(G)` by leftmost derivation search.
    pub fn derives(&self, word: &[Symbol]) -> bool {
        let mut stack: Vec<(Vec<Symbol>, usize)> = vec![(vec![self.start.clone()], 0)];
        let mut seen = BTreeSet::new();
        while let Some((pred, i)) = stack.pop() {
            if i == word.len() {
                if pred.is_empty() {
                    return true;
                }
                continue;
            }
            // every rule produces exactly one terminal
            if pred.is_empty() || pred.len() > word.len() - i || !seen.insert((pred.clone(), i)) {
                continue;
            }
            let top = &pred[pred.len() - 1];
            for r in self.rules.iter().filter(|r| r.lhs == *top && r.head == word[i]) {
                let mut next = pred[..pred.len() - 1].to_vec();
                next.extend(r.tail.iter().rev().cloned());
                stack.push((next, i + 1));
            }
        }
        false
    }

    /// All words of L(G) up to length `n`, length-lexicographically in terminal order.
    pub fn language(&self, n: usize) -> Vec<Word> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut stack: Vec<(Vec<Symbol>, Word)> = vec![(vec![self.start.clone()], Vec::new())];
        while let Some((pred, w)) = stack.pop() {
            if pred.is_empty() {
                out.insert(w);
                continue;
            }
            if pred.len() > n - w.len() || !seen.insert((pred.clone(), w.clone())) {
                continue;
            }
            let top = &pred[pred.len() - 1];
            for r in self.rules.iter().filter(|r| r.lhs == *top) {
                let mut next = pred[..pred.len() - 1].to_vec();
                next.extend(r.tail.iter().rev().cloned());
                let mut nw = w.clone();
                nw.push(r.head.clone());
                stack.push((next, nw));
            }
        }
        let rank = |s: &Symbol| self.terminals.iter().position(|t| t == s).unwrap_or(usize::MAX);
        let mut v: Vec<Word> = out.into_iter().collect();
        v.sort_by_key(|w| (w.len(), w.iter().map(rank).collect::<Vec<_>>()));
        v
    }
}

impl fmt::Display for GnfGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            writeln!(f, "{}: {r}", i + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::symbols;

    fn anbn() -> GnfGrammar {
        GnfGrammar::from_literals("anbn", "S", &[("S", "a", &["S", "B"]), ("S", "a", &["B"]), ("B", "b", &[])])
    }

    #[test]
    fn derives_anbn() {
        let g = anbn();
        assert!(g.derives(&symbols(&["a", "b"])));
        assert!(g.derives(&symbols(&["a", "a", "b", "b"])));
        assert!(!g.derives(&symbols(&["a", "a", "b"])));
        assert!(!g.derives(&[]));
        assert!(!g.derives(&symbols(&["a", "b", "a", "b"])));
    }

    #[test]
    fn language_is_length_lex() {
        let got = anbn().language(6);
        let want: Vec<Word> = (1..=3)
            .map(|n| [vec![Symbol::new("a").unwrap(); n], vec![Symbol::new("b").unwrap(); n]].concat())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn rejects_non_gnf() {
        let s = |t: &str| Symbol::new(t).unwrap();
        let bad = GnfGrammar::new(
            "g",
            vec![s("S")],
            vec![s("a")],
            s("S"),
            vec![GnfRule { lhs: s("S"), head: s("S"), tail: vec![] }],
        );
        assert!(bad.is_err());
    }
}
