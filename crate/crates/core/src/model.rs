//! Finite ∈-structures and classes over them.
//!
//! A structure is a finite domain with a total binary membership relation;
//! a class is any subset of the domain. The representation test —
//! "some element's extension equals the class" — is what separates sets
//! from paradoxical classes at this scale.
//!
//! Structures need not be extensional: distinct elements may share an
//! extension. Representative lookups break ties toward the lowest element
//! index.

use std::fmt;
use thiserror::Error;

/// Largest domain a `u64` extension bitmap can describe. Sweeps stay far
/// below this; the explicit cap keeps bitmap arithmetic honest.
pub const MAX_DOMAIN: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown element name `{name}` on line {line}")]
    DanglingName { line: usize, name: String },
    #[error("domain size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },
    #[error("enumeration budget exceeded: size {n} > cap {cap}")]
    EnumerationBudget { n: usize, cap: usize },
}

/// A finite model of the membership language: `membership(i, j)` says
/// element `i` is a member of element `j`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    size: usize,
    /// `ext[j]` = bitmap of the members of element `j`.
    ext: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl Structure {
    /// Builds a structure from explicit member pairs `(m, p)` meaning
    /// `m ∈ p`.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Structure {
        assert!(size <= MAX_DOMAIN);
        let mut ext = vec![0u64; size];
        for &(m, p) in pairs {
            assert!(m < size && p < size);
            ext[p] |= 1 << m;
        }
        Structure {
            size,
            ext,
            labels: None,
        }
    }

    /// Decodes a relation bitmap laid out row-major: bit `i*n + j` set means
    /// `i ∈ j`. This is the enumeration order of [`enumerate_structures`].
    pub fn from_bitmap(size: usize, bitmap: u64) -> Structure {
        assert!(size * size <= 64);
        let mut ext = vec![0u64; size];
        for i in 0..size {
            for j in 0..size {
                if bitmap >> (i * size + j) & 1 == 1 {
                    ext[j] |= 1 << i;
                }
            }
        }
        Structure {
            size,
            ext,
            labels: None,
        }
    }

    /// Inverse of [`Structure::from_bitmap`].
    pub fn to_bitmap(&self) -> u64 {
        let mut bm = 0u64;
        for j in 0..self.size {
            for i in 0..self.size {
                if self.member(i, j) {
                    bm |= 1 << (i * self.size + j);
                }
            }
        }
        bm
    }

    /// Parses the universe file format: an `elements` line naming the
    /// domain in order, then `member x y` lines meaning `x ∈ y`.
    ///
    /// ```text
    /// # one reflexive point
    /// elements a
    /// member a a
    /// ```
    pub fn parse(text: &str) -> Result<Structure, ModelError> {
        let mut names: Option<Vec<String>> = None;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let mut it = line.split_whitespace();
            match it.next().unwrap() {
                "elements" => {
                    if names.is_some() {
                        return Err(ModelError::Parse {
                            line: lineno,
                            msg: "duplicate `elements` line".into(),
                        });
                    }
                    let ns: Vec<String> = it.map(str::to_string).collect();
                    for n in &ns {
                        let ok = n.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                            && n.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
                        if !ok {
                            return Err(ModelError::Parse {
                                line: lineno,
                                msg: format!("bad element name `{n}` (want [a-z][a-z0-9_]*)"),
                            });
                        }
                    }
                    if ns.len() > MAX_DOMAIN {
                        return Err(ModelError::TooLarge {
                            size: ns.len(),
                            max: MAX_DOMAIN,
                        });
                    }
                    if let Some(dup) = ns.iter().enumerate().find(|(i, n)| ns[..*i].contains(n)) {
                        return Err(ModelError::Parse {
                            line: lineno,
                            msg: format!("duplicate element name `{}`", dup.1),
                        });
                    }
                    names = Some(ns);
                }
                "member" => {
                    let names = names.as_ref().ok_or(ModelError::Parse {
                        line: lineno,
                        msg: "`member` before `elements`".into(),
                    })?;
                    let mut resolve = |what: &str| -> Result<usize, ModelError> {
                        let tok = it.next().ok_or_else(|| ModelError::Parse {
                            line: lineno,
                            msg: format!("missing {what}"),
                        })?;
                        names.iter().position(|n| n == tok).ok_or_else(|| ModelError::DanglingName {
                            line: lineno,
                            name: tok.to_string(),
                        })
                    };
                    let m = resolve("member element")?;
                    let p = resolve("parent element")?;
                    pairs.push((m, p));
                }
                other => {
                    return Err(ModelError::Parse {
                        line: lineno,
                        msg: format!("unknown declaration `{other}`"),
                    })
                }
            }
        }
        let names = names.ok_or(ModelError::Parse {
            line: 0,
            msg: "missing `elements` line".into(),
        })?;
        let mut s = Structure::from_pairs(names.len(), &pairs);
        s.labels = Some(names);
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn member(&self, m: usize, p: usize) -> bool {
        self.ext[p] >> m & 1 == 1
    }

    /// `{x | x ∈ e}` as a bitmap.
    pub fn extension_of(&self, e: usize) -> u64 {
        self.ext[e]
    }

    /// Bitmap of the full domain.
    pub fn domain_mask(&self) -> u64 {
        if self.size == 0 {
            0
        } else {
            (1u64 << self.size) - 1
        }
    }

    pub fn label(&self, e: usize) -> String {
        match &self.labels {
            Some(ls) => ls[e].clone(),
            None => format!("e{e}"),
        }
    }

    pub fn element_by_label(&self, name: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|n| n == name)
    }

    /// Least element whose extension equals `class`, if any. `Some` is
    /// exactly what "the class is a set in this structure" means.
    pub fn is_represented(&self, class: u64) -> Option<usize> {
        (0..self.size).find(|e| self.ext[*e] == class)
    }

    /// Element `e` is grounded iff no membership cycle is reachable from it
    /// by descending through members.
    pub fn grounded_elements(&self) -> u64 {
        let mut grounded = 0u64;
        loop {
            let mut changed = false;
            for e in 0..self.size {
                if grounded >> e & 1 == 0 && self.ext[e] & !grounded == 0 {
                    grounded |= 1 << e;
                    changed = true;
                }
            }
            if !changed {
                return grounded;
            }
        }
    }

    /// `e ∈ⁿ e` test inside the structure (membership cycle of length `n`
    /// through `e`).
    pub fn n_cyclic(&self, e: usize, n: u32) -> bool {
        debug_assert!(n >= 1);
        let mut frontier = self.ext[e];
        for _ in 1..n {
            let mut next = 0u64;
            let mut rest = frontier;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= self.ext[i];
            }
            frontier = next;
        }
        frontier >> e & 1 == 1
    }

    pub fn describe_class(&self, class: u64) -> String {
        let names: Vec<String> = (0..self.size).filter(|e| class >> e & 1 == 1).map(|e| self.label(e)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Where a class extension came from; metadata only, never identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassOrigin {
    Explicit,
    Formula(String),
    Builder(&'static str),
}

/// A class over a fixed structure: an extension bitmap plus provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRef {
    pub extension: u64,
    pub origin: ClassOrigin,
}

impl ClassRef {
    pub fn explicit(extension: u64) -> ClassRef {
        ClassRef {
            extension,
            origin: ClassOrigin::Explicit,
        }
    }
}

/// One certificate entry: element `e` represents a subset of the class and
/// `witness ∈ C ∖ ext(e)` evades it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEntry {
    pub element: usize,
    pub subset: u64,
    pub witness: usize,
}

/// A productive choice: for every element representing a subset of the
/// class, a member of the class outside that subset.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProductiveChoiceCertificate {
    pub entries: Vec<WitnessEntry>,
}

impl ProductiveChoiceCertificate {
    /// Re-validates the certificate with membership lookups only: every
    /// represented subset of the class is covered and every witness lies in
    /// the class but outside its subset.
    pub fn validate(&self, m: &Structure, class: u64) -> bool {
        for e in 0..m.size() {
            let ext = m.extension_of(e);
            if ext & !class != 0 {
                continue;
            }
            let Some(entry) = self.entries.iter().find(|en| en.element == e) else {
                return false;
            };
            if entry.subset != ext {
                return false;
            }
            let w = entry.witness;
            if class >> w & 1 == 0 || ext >> w & 1 == 1 {
                return false;
            }
        }
        true
    }
}

/// Verdict of the decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The class is a set: the least representing element.
    Set(usize),
    /// The class is paradoxical: a full productive-choice certificate.
    Paradoxical(ProductiveChoiceCertificate),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Set(e) => write!(f, "SET e{e}"),
            Verdict::Paradoxical(c) => write!(f, "PARADOXICAL ({} witnesses)", c.entries.len()),
        }
    }
}

/// All membership relations on `n` elements in lexicographic bitmap order.
pub fn enumerate_structures(n: usize, cap: usize) -> Result<impl Iterator<Item = Structure>, ModelError> {
    if n > cap {
        return Err(ModelError::EnumerationBudget { n, cap });
    }
    debug_assert!(n * n <= 32, "enumeration only supported for tiny domains");
    let total: u64 = 1 << (n * n);
    Ok((0..total).map(move |bm| Structure::from_bitmap(n, bm)))
}

/// Default hard cap for exhaustive structure sweeps.
pub const ENUMERATION_CAP: usize = 4;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_one_reflexive_point() {
        let m = Structure::parse("elements a\nmember a a\n").unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.member(0, 0));
        assert_eq!(m.extension_of(0), 0b1);
    }

    #[test]
    fn parse_two_points() {
        let m = Structure::parse("elements a b\nmember a b\n").unwrap();
        assert!(m.member(0, 1));
        assert!(!m.member(1, 0));
        assert_eq!(m.extension_of(0), 0); // ext(a) = ∅
        assert_eq!(m.extension_of(1), 0b01); // ext(b) = {a}
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Structure::parse("member a b\n"),
            Err(ModelError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Structure::parse("elements a\nmember a q\n"),
            Err(ModelError::DanglingName { line: 2, .. })
        ));
        assert!(matches!(
            Structure::parse("elements a B\n"),
            Err(ModelError::Parse { .. })
        ));
        assert!(matches!(
            Structure::parse("elements a a\n"),
            Err(ModelError::Parse { .. })
        ));
        assert!(matches!(Structure::parse(""), Err(ModelError::Parse { .. })));
    }

    #[test]
    fn representation_examples() {
        // Single a with a ∉ a: the empty class is represented by a.
        let m = Structure::from_pairs(1, &[]);
        assert_eq!(m.is_represented(0), Some(0));
        // Russell's extension {a} is unrepresented there.
        assert_eq!(m.is_represented(0b1), None);

        // Single a with a ∈ a: {a} is represented by a.
        let m = Structure::from_pairs(1, &[(0, 0)]);
        assert_eq!(m.is_represented(0b1), Some(0));
        assert_eq!(m.is_represented(0), None);
    }

    #[test]
    fn every_element_extension_is_represented() {
        // The set→class direction: {x | x ∈ e} is a set for every e, in
        // every structure of size ≤ 3.
        for n in 0..=3usize {
            for m in enumerate_structures(n, 4).unwrap() {
                for e in 0..n {
                    assert!(m.is_represented(m.extension_of(e)).is_some());
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_are_exact() {
        assert_eq!(enumerate_structures(0, 4).unwrap().count(), 1);
        assert_eq!(enumerate_structures(2, 4).unwrap().count(), 16);
        assert_eq!(enumerate_structures(4, 4).unwrap().count(), 65536);
        assert!(enumerate_structures(5, 4).is_err());
    }

    #[test]
    fn bitmap_round_trip() {
        for bm in 0u64..512 {
            let m = Structure::from_bitmap(3, bm);
            assert_eq!(m.to_bitmap(), bm);
        }
    }

    #[test]
    fn groundedness_and_cycles() {
        // a ∈ a, b ∈ c: a ungrounded, b and c grounded.
        let m = Structure::from_pairs(3, &[(0, 0), (1, 2)]);
        assert_eq!(m.grounded_elements(), 0b110);
        assert!(m.n_cyclic(0, 1));
        assert!(m.n_cyclic(0, 4));
        assert!(!m.n_cyclic(1, 1));

        // Structure-level 2-cycle: a ∈ b ∈ a.
        let m = Structure::from_pairs(2, &[(0, 1), (1, 0)]);
        assert!(!m.n_cyclic(0, 1));
        assert!(m.n_cyclic(0, 2));
        assert!(m.n_cyclic(1, 2));
        assert_eq!(m.grounded_elements(), 0);
    }

    #[test]
    fn certificate_validation_rejects_tampering() {
        let m = Structure::from_pairs(1, &[]);
        // Russell class {a} in the irreflexive point: a represents ∅ ⊆ {a},
        // witness a.
        let good = ProductiveChoiceCertificate {
            entries: vec![WitnessEntry {
                element: 0,
                subset: 0,
                witness: 0,
            }],
        };
        assert!(good.validate(&m, 0b1));
        let missing = ProductiveChoiceCertificate { entries: vec![] };
        assert!(!missing.validate(&m, 0b1));
        let wrong = ProductiveChoiceCertificate {
            entries: vec![WitnessEntry {
                element: 0,
                subset: 0b1,
                witness: 0,
            }],
        };
        assert!(!wrong.validate(&m, 0b1));
    }
}
