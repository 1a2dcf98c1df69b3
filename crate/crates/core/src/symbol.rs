use std::fmt;
use std::ops::Deref;

/// A token of an input or output alphabet.
///
/// Alphabets are sets of non-negative integers. The empty emission is never a
/// symbol: it is the zero-length [`TokenString`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn id(self) -> u32 {
        self.0
    }
}

impl From<u32> for Symbol {
    fn from(id: u32) -> Self {
        Symbol(id)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite string of symbols. The empty string is λ.
///
/// Concatenation forms a monoid with λ as identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenString(Vec<Symbol>);

impl TokenString {
    pub fn empty() -> Self {
        TokenString(Vec::new())
    }

    pub fn new(tokens: Vec<Symbol>) -> Self {
        TokenString(tokens)
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_from(&mut self, other: &[Symbol]) {
        self.0.extend_from_slice(other);
    }

    /// `self ∘ other`.
    pub fn concat(&self, other: &[Symbol]) -> TokenString {
        let mut v = Vec::with_capacity(self.0.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        TokenString(v)
    }

    /// Prepends `prefix` in place.
    pub fn prepend(&mut self, prefix: &[Symbol]) {
        if prefix.is_empty() {
            return;
        }
        let mut v = Vec::with_capacity(prefix.len() + self.0.len());
        v.extend_from_slice(prefix);
        v.append(&mut self.0);
        self.0 = v;
    }

    /// `self` repeated `n` times.
    pub fn repeat(&self, n: usize) -> TokenString {
        TokenString(self.0.repeat(n))
    }

    /// Removes `prefix` from the front, returning `None` if it is not a prefix.
    pub fn strip_prefix(&self, prefix: &[Symbol]) -> Option<TokenString> {
        self.0
            .strip_prefix(prefix)
            .map(|rest| TokenString(rest.to_vec()))
    }

    pub fn starts_with(&self, prefix: &[Symbol]) -> bool {
        self.0.starts_with(prefix)
    }
}

/// Length of the longest common prefix of two strings.
pub fn lcp_len(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Longest common prefix of a collection of strings. `None` for an empty
/// collection (the prefix of nothing is undefined, not λ).
pub fn longest_common_prefix<'a, I>(strings: I) -> Option<TokenString>
where
    I: IntoIterator<Item = &'a [Symbol]>,
{
    let mut iter = strings.into_iter();
    let first = iter.next()?;
    let mut len = first.len();
    for s in iter {
        len = len.min(lcp_len(&first[..len], s));
        if len == 0 {
            break;
        }
    }
    Some(TokenString(first[..len].to_vec()))
}

impl Deref for TokenString {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for TokenString {
    fn from(v: Vec<Symbol>) -> Self {
        TokenString(v)
    }
}

impl From<&[Symbol]> for TokenString {
    fn from(v: &[Symbol]) -> Self {
        TokenString(v.to_vec())
    }
}

impl From<Vec<u32>> for TokenString {
    fn from(v: Vec<u32>) -> Self {
        TokenString(v.into_iter().map(Symbol).collect())
    }
}

impl<const N: usize> From<[u32; N]> for TokenString {
    fn from(v: [u32; N]) -> Self {
        TokenString(v.into_iter().map(Symbol).collect())
    }
}

impl FromIterator<Symbol> for TokenString {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        TokenString(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TokenString {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for TokenString {
    /// Space separated ids, `-1` for λ.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-1");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", s.0)?;
        }
        Ok(())
    }
}
