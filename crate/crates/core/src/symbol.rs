//! Tape symbols and words.

use std::fmt;
use std::sync::Arc;

use crate::error::ModelError;

/// Token used for the left sentinel in files and traces.
pub const LEFT_TOKEN: &str = "^";
/// Token used for the right sentinel in files and traces.
pub const RIGHT_TOKEN: &str = "$";

/// An atomic tape symbol.
///
/// Symbols are text tokens, so structured symbols such as `(3,a)` or `a^`
/// are ordinary symbols. The two sentinels are the reserved tokens `^` and `$`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

/// A word is a sequence of symbols; the empty vector is λ.
pub type Word = Vec<Symbol>;

impl Symbol {
    /// Creates a working symbol. Sentinel tokens and malformed tokens are refused.
    pub fn new(token: &str) -> Result<Symbol, ModelError> {
        if token.is_empty()
            || token.chars().any(char::is_whitespace)
            || token.starts_with('#')
            || token == "-"
            || token == "->"
            || token == LEFT_TOKEN
            || token == RIGHT_TOKEN
        {
            return Err(ModelError::BadToken(token.to_string()));
        }
        Ok(Symbol(Arc::from(token)))
    }

    pub fn left() -> Symbol {
        Symbol(Arc::from(LEFT_TOKEN))
    }

    pub fn right() -> Symbol {
        Symbol(Arc::from(RIGHT_TOKEN))
    }

    /// Parses a window token, where `^` and `$` denote the sentinels.
    pub fn parse_cell(token: &str) -> Result<Symbol, ModelError> {
        match token {
            LEFT_TOKEN => Ok(Symbol::left()),
            RIGHT_TOKEN => Ok(Symbol::right()),
            _ => Symbol::new(token),
        }
    }

    /// The derivation symbol `(i,a)` for rule `i` with head `a`.
    pub fn nabla(rule: usize, head: &Symbol) -> Symbol {
        Symbol(Arc::from(format!("({rule},{head})")))
    }

    /// The hatted copy `a^` of an input symbol.
    pub fn hat(base: &Symbol) -> Symbol {
        Symbol(Arc::from(format!("{base}^")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_left(&self) -> bool {
        &*self.0 == LEFT_TOKEN
    }

    pub fn is_right(&self) -> bool {
        &*self.0 == RIGHT_TOKEN
    }

    pub fn is_sentinel(&self) -> bool {
        self.is_left() || self.is_right()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Builds symbols from tokens, panicking on malformed tokens. Meant for literals.
pub fn symbols(tokens: &[&str]) -> Vec<Symbol> {
    tokens
        .iter()
        .map(|t| Symbol::parse_cell(t).unwrap_or_else(|e| panic!("{e}")))
        .collect()
}

/// Renders a word by concatenating tokens; λ renders as the empty string.
pub fn concat(word: &[Symbol]) -> String {
    word.iter().map(Symbol::as_str).collect()
}

/// Renders a word with tokens separated by single spaces.
pub fn spaced(word: &[Symbol]) -> String {
    word.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
}

/// Splits text into symbols of `alphabet`.
///
/// Text containing whitespace is split on whitespace. Otherwise the text is
/// segmented into alphabet tokens; the segmentation must be unique.
/// `-` and the empty string denote λ.
pub fn tokenize(text: &str, alphabet: &[Symbol]) -> Result<Word, ModelError> {
    let text = text.trim();
    if text.is_empty() || text == "-" {
        return Ok(Vec::new());
    }
    if text.contains(char::is_whitespace) {
        return text
            .split_whitespace()
            .map(|t| {
                alphabet
                    .iter()
                    .find(|s| s.as_str() == t)
                    .cloned()
                    .ok_or_else(|| ModelError::UnknownSymbol(t.to_string()))
            })
            .collect();
    }
    // ways[i] = number of segmentations of text[i..], capped at 2
    let bytes = text.len();
    let mut ways = vec![0u8; bytes + 1];
    let mut choice: Vec<Option<usize>> = vec![None; bytes + 1];
    ways[bytes] = 1;
    for i in (0..bytes).rev() {
        if !text.is_char_boundary(i) {
            continue;
        }
        for (idx, s) in alphabet.iter().enumerate() {
            if text[i..].starts_with(s.as_str()) {
                let next = i + s.as_str().len();
                if ways[next] > 0 {
                    ways[i] = (ways[i] + ways[next]).min(2);
                    choice[i] = Some(idx);
                }
            }
        }
    }
    match ways[0] {
        0 => Err(ModelError::Unsegmentable(text.to_string())),
        1 => {
            let mut out = Vec::new();
            let mut i = 0;
            while i < bytes {
                let idx = choice[i].expect("segmentation exists");
                out.push(alphabet[idx].clone());
                i += alphabet[idx].as_str().len();
            }
            Ok(out)
        }
        _ => Err(ModelError::AmbiguousWord(text.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_tokens_are_reserved() {
        assert!(Symbol::new("^").is_err());
        assert!(Symbol::new("$").is_err());
        assert!(Symbol::new("").is_err());
        assert!(Symbol::new("a b").is_err());
        assert!(Symbol::parse_cell("^").unwrap().is_left());
    }

    #[test]
    fn structured_tokens() {
        let a = Symbol::new("a").unwrap();
        assert_eq!(Symbol::nabla(3, &a).as_str(), "(3,a)");
        assert_eq!(Symbol::hat(&a).as_str(), "a^");
    }

    #[test]
    fn tokenize_segments_and_splits() {
        let alpha = symbols(&["a1", "ā1"]);
        let w = tokenize("a1ā1a1ā1", &alpha).unwrap();
        assert_eq!(w, symbols(&["a1", "ā1", "a1", "ā1"]));
        assert_eq!(tokenize("a1 ā1", &alpha).unwrap().len(), 2);
        assert!(tokenize("", &alpha).unwrap().is_empty());
        assert!(matches!(tokenize("b", &alpha), Err(ModelError::Unsegmentable(_))));
        let amb = symbols(&["a", "aa"]);
        assert!(matches!(tokenize("aa", &amb), Err(ModelError::AmbiguousWord(_))));
        let nab = symbols(&["(1,a)", "(2,a)", "(3,b)", "a", "b"]);
        assert_eq!(tokenize("(1,a)(2,a)(3,b)b", &nab).unwrap().len(), 4);
    }
}
