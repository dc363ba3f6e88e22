//! Constant-length morphisms, composition, columns and incidence matrices.

use crate::alphabet::{coded_symbol_name, Alphabet, SymbolId, Word};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

/// A constant-length morphism: every source symbol maps to a word of exactly
/// `length` symbols over the target alphabet. Images are never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    length: usize,
    /// `images[a]` is the image of source symbol `a`, each of length `length`.
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::LengthMismatch {
                letter: "<image table>".into(),
                expected: source.len(),
                found: images.len(),
            });
        }
        let length = images.first().map(|w| w.len()).unwrap_or(0);
        if length == 0 {
            return Err(Error::LengthMismatch {
                letter: source.name(0).to_string(),
                expected: 1,
                found: 0,
            });
        }
        for (a, img) in images.iter().enumerate() {
            if img.len() != length {
                return Err(Error::LengthMismatch {
                    letter: source.name(a as SymbolId).to_string(),
                    expected: length,
                    found: img.len(),
                });
            }
            for &s in img {
                if s as usize >= target.len() {
                    return Err(Error::UnknownSymbol(format!("<id {s}>")));
                }
            }
        }
        Ok(Self {
            source,
            target,
            length,
            images,
        })
    }

    /// Build from symbol names: `images[i]` is the image of `source.symbols()[i]`.
    pub fn from_names(
        source: &Alphabet,
        target: &Alphabet,
        images: &[&str],
    ) -> Result<Self> {
        let imgs = images
            .iter()
            .map(|w| target.parse_word(w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source.clone(), target.clone(), imgs)
    }

    /// The identity morphism on `alphabet` (length 1).
    pub fn identity(alphabet: &Alphabet) -> Self {
        let images = alphabet.ids().map(|id| vec![id]).collect();
        Self {
            source: alphabet.clone(),
            target: alphabet.clone(),
            length: 1,
            images,
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn image(&self, a: SymbolId) -> &[SymbolId] {
        &self.images[a as usize]
    }

    /// Apply to a word over the source alphabet.
    pub fn apply(&self, word: &[SymbolId]) -> Word {
        let mut out = Vec::with_capacity(word.len() * self.length);
        for &a in word {
            out.extend_from_slice(self.image(a));
        }
        out
    }

    /// Is the map `a -> image(a)` injective?
    pub fn is_injective_on_letters(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.images.iter().all(|img| seen.insert(img.clone()))
    }

    /// The column maps `a -> j`-th symbol of `image(a)`, in index order.
    pub fn columns(&self) -> Vec<ColumnMap> {
        (0..self.length)
            .map(|j| ColumnMap {
                index: j,
                map: self.images.iter().map(|img| img[j]).collect(),
            })
            .collect()
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let mut entries =
            vec![vec![BigUint::zero(); self.source.len()]; self.target.len()];
        for (a, img) in self.images.iter().enumerate() {
            for &t in img {
                entries[t as usize][a] += 1u32;
            }
        }
        IncidenceMatrix {
            rows: self.target.len(),
            cols: self.source.len(),
            entries,
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.source.ids() {
            if a > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{} -> {}",
                self.source.name(a),
                self.target.render_word_compact(self.image(a))
            )?;
        }
        Ok(())
    }
}

/// Compose two morphisms: `(outer ∘ inner)(a) = outer(inner(a))`.
///
/// Requires `inner.target == outer.source` exactly (same symbols, same order).
/// The composed length is the product of the lengths.
pub fn compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism> {
    if inner.target != outer.source {
        return Err(Error::AlphabetMismatch {
            expected: outer.source.to_string(),
            found: inner.target.to_string(),
        });
    }
    let images = inner
        .images
        .iter()
        .map(|img| outer.apply(img))
        .collect::<Vec<_>>();
    Ok(Morphism {
        source: inner.source.clone(),
        target: outer.target.clone(),
        length: outer.length * inner.length,
        images,
    })
}

/// One column of a morphism: the map sending each source symbol to the
/// `index`-th symbol of its image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnMap {
    pub index: usize,
    /// `map[a]` = `index`-th symbol of the image of `a`.
    pub map: Vec<SymbolId>,
}

impl ColumnMap {
    pub fn apply(&self, a: SymbolId) -> SymbolId {
        self.map[a as usize]
    }

    /// Cardinality of the image set.
    pub fn image_cardinality(&self) -> usize {
        self.map.iter().collect::<BTreeSet<_>>().len()
    }
}

/// Incidence matrix of a morphism: rows indexed by target symbols, columns by
/// source symbols, entry (i, j) counting occurrences of `i` in the image of
/// `j`. Entries are arbitrary-precision: composed lengths outgrow u64 fast.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigUint>>,
}

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigUint {
        &self.entries[row][col]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &IncidenceMatrix) -> IncidenceMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible matrix dimensions");
        let mut entries = vec![vec![BigUint::zero(); rhs.cols]; self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let e = &self.entries[i][k];
                if e.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let r = &rhs.entries[k][j];
                    if !r.is_zero() {
                        entries[i][j] += e * r;
                    }
                }
            }
        }
        IncidenceMatrix {
            rows: self.rows,
            cols: rhs.cols,
            entries,
        }
    }

    /// Column sums; all equal the morphism length for a constant-length map.
    pub fn column_sums(&self) -> Vec<BigUint> {
        (0..self.cols)
            .map(|j| self.entries.iter().map(|row| &row[j]).sum())
            .collect()
    }

    fn support(&self) -> Vec<Vec<bool>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| !e.is_zero()).collect())
            .collect()
    }
}

/// Default power cap for an s-by-s non-negative matrix: (s-1)^2 + 1 steps
/// decide primitivity.
pub fn default_primitivity_cap(size: usize) -> usize {
    if size == 0 {
        1
    } else {
        (size - 1) * (size - 1) + 1
    }
}

/// The least k <= cap with M^k strictly positive, if any.
///
/// Only the support pattern matters, so powers are taken over booleans.
/// Panics if the matrix is not square.
pub fn primitive_power(matrix: &IncidenceMatrix, cap: usize) -> Option<usize> {
    assert!(matrix.is_square(), "primitivity needs a square matrix");
    let n = matrix.rows;
    let base = matrix.support();
    let all_positive =
        |m: &Vec<Vec<bool>>| m.iter().all(|row| row.iter().all(|&b| b));
    let mut acc = base.clone();
    for k in 1..=cap {
        if all_positive(&acc) {
            return Some(k);
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for t in 0..n {
                if acc[i][t] {
                    for j in 0..n {
                        if base[t][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        acc = next;
    }
    None
}

/// Sliding-block presentation of a substitution with window width `w`.
///
/// The recoded morphism acts on the alphabet of legal width-`w` words: the
/// image of a window is the sequence of windows of the substituted text read
/// at offsets 0..length. Every window so produced must itself be legal.
pub fn sliding_block_recode(
    m: &Morphism,
    window: usize,
    legal_words: &BTreeSet<Word>,
) -> Result<Morphism> {
    if m.source != m.target {
        return Err(Error::AlphabetMismatch {
            expected: m.source.to_string(),
            found: m.target.to_string(),
        });
    }
    if window == 0 {
        return Err(Error::IllegalWindow("window width must be >= 1".into()));
    }
    let alphabet = &m.source;
    let mut words: Vec<Word> = Vec::new();
    for w in legal_words {
        if w.len() != window {
            return Err(Error::IllegalWindow(format!(
                "legal word `{}` does not have width {window}",
                alphabet.render_word(w)
            )));
        }
        for &s in w {
            if s as usize >= alphabet.len() {
                return Err(Error::UnknownSymbol(format!("<id {s}>")));
            }
        }
        words.push(w.clone());
    }
    words.sort();
    let coded = Alphabet::new(
        words
            .iter()
            .map(|w| coded_symbol_name(alphabet, w))
            .collect::<Vec<_>>(),
    )?;
    let code_of = |w: &[SymbolId]| -> Result<SymbolId> {
        words
            .binary_search_by(|probe| probe.as_slice().cmp(w))
            .map(|i| i as SymbolId)
            .map_err(|_| {
                Error::IllegalWindow(format!(
                    "required window `{}` is not legal",
                    alphabet.render_word(w)
                ))
            })
    };
    let mut images = Vec::with_capacity(words.len());
    for w in &words {
        let expanded = m.apply(w);
        // Windows at offsets 0..length; offset j needs letters j..j+window,
        // always inside the expansion since length + window - 1 <= length*window.
        let mut img = Vec::with_capacity(m.length);
        for j in 0..m.length {
            img.push(code_of(&expanded[j..j + window])?);
        }
        images.push(img);
    }
    Morphism::new(coded.clone(), coded, images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> Morphism {
        let a = Alphabet::new(["0", "1"]).unwrap();
        Morphism::from_names(&a, &a, &["0 1 1", "0 0 1"]).unwrap()
    }

    fn theta_durand() -> Morphism {
        let a = Alphabet::new(["a", "b", "c"]).unwrap();
        Morphism::from_names(&a, &a, &["a c b", "b a b", "c b c"]).unwrap()
    }

    #[test]
    fn compose_expands_images() {
        let t = theta();
        let tt = compose(&t, &t).unwrap();
        // theta(0) theta(1) theta(1)
        assert_eq!(tt.image(0), t.target().parse_word("0 1 1 0 0 1 0 0 1").unwrap());
        assert_eq!(tt.length(), 9);
    }

    #[test]
    fn compose_identity_is_neutral() {
        let t = theta();
        let id = Morphism::identity(t.target());
        assert_eq!(compose(&id, &t).unwrap(), t);
        assert_eq!(compose(&t, &Morphism::identity(t.source())).unwrap(), t);
    }

    #[test]
    fn compose_lengths_multiply() {
        let t = theta();
        let d = theta_durand();
        assert_eq!(compose(&t, &t).unwrap().length(), 9);
        assert_eq!(compose(&d, &d).unwrap().length(), 9);
    }

    #[test]
    fn compose_requires_chaining() {
        let t = theta();
        let d = theta_durand();
        assert!(matches!(
            compose(&t, &d),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn columns_reassemble() {
        let t = theta();
        let cols = t.columns();
        assert_eq!(cols.len(), 3);
        // column 0 is a coincidence: both letters map to 0
        assert_eq!(cols[0].image_cardinality(), 1);
        for a in t.source().ids() {
            let rebuilt: Word = cols.iter().map(|c| c.apply(a)).collect();
            assert_eq!(rebuilt, t.image(a));
        }
    }

    #[test]
    fn identity_has_identity_column() {
        let a = Alphabet::new(["x", "y"]).unwrap();
        let id = Morphism::identity(&a);
        let cols = id.columns();
        assert_eq!(cols.len(), 1);
        assert_eq!(cols[0].map, vec![0, 1]);
    }

    #[test]
    fn durand_third_column_has_two_images() {
        let d = theta_durand();
        let cols = d.columns();
        // third symbols are b, b, c
        assert_eq!(cols[2].image_cardinality(), 2);
    }

    #[test]
    fn incidence_counts() {
        let t = theta();
        let m = t.incidence_matrix();
        assert_eq!(m.entry(0, 0), &BigUint::from(1u32));
        assert_eq!(m.entry(1, 0), &BigUint::from(2u32));
        assert_eq!(m.entry(0, 1), &BigUint::from(2u32));
        assert_eq!(m.entry(1, 1), &BigUint::from(1u32));
        assert!(m.column_sums().iter().all(|s| s == &BigUint::from(3u32)));
    }

    #[test]
    fn incidence_of_identity() {
        let a = Alphabet::new(["x", "y", "z"]).unwrap();
        let m = Morphism::identity(&a).incidence_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1u32 } else { 0u32 };
                assert_eq!(m.entry(i, j), &BigUint::from(expect));
            }
        }
    }

    #[test]
    fn incidence_is_multiplicative() {
        let t = theta();
        let tt = compose(&t, &t).unwrap();
        assert_eq!(
            tt.incidence_matrix(),
            t.incidence_matrix().mul(&t.incidence_matrix())
        );
    }

    #[test]
    fn injectivity_on_letters() {
        let t = theta();
        assert!(t.is_injective_on_letters());
        // rho of the running example: barred and unbarred images coincide
        let a4 = Alphabet::new(["0", "1", "0b", "1b"]).unwrap();
        let a2 = Alphabet::new(["0", "1"]).unwrap();
        let rho =
            Morphism::from_names(&a4, &a2, &["0 1 1", "0 0 1", "0 1 1", "0 0 1"])
                .unwrap();
        assert!(!rho.is_injective_on_letters());
        // vartheta is injective
        let vt = Morphism::from_names(
            &a4,
            &a4,
            &["0 1b 1", "0 0b 1", "0b 1 1b", "0b 0 1b"],
        )
        .unwrap();
        assert!(vt.is_injective_on_letters());
    }

    #[test]
    fn primitivity_basic() {
        let t = theta();
        let m = t.incidence_matrix();
        assert_eq!(primitive_power(&m, default_primitivity_cap(2)), Some(1));

        let a = Alphabet::new(["x", "y"]).unwrap();
        let id = Morphism::identity(&a).incidence_matrix();
        assert_eq!(primitive_power(&id, default_primitivity_cap(2)), None);

        let d = theta_durand().incidence_matrix();
        let k = primitive_power(&d, default_primitivity_cap(3));
        assert!(matches!(k, Some(k) if k >= 1));
    }

    #[test]
    fn sliding_block_window_one_is_isomorphic() {
        let t = theta();
        let legal: BTreeSet<Word> = t.source().ids().map(|i| vec![i]).collect();
        let recoded = sliding_block_recode(&t, 1, &legal).unwrap();
        assert_eq!(recoded, t);
    }

    #[test]
    fn sliding_block_window_two() {
        let t = theta();
        let legal: BTreeSet<Word> =
            [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]].into();
        let recoded = sliding_block_recode(&t, 2, &legal).unwrap();
        // theta(01) = 011001; windows at offsets 0,1,2: (0,1)(1,1)(1,0)
        let src = recoded.source();
        let w01 = src.id_of("0.1").unwrap();
        let expected = vec![
            src.id_of("0.1").unwrap(),
            src.id_of("1.1").unwrap(),
            src.id_of("1.0").unwrap(),
        ];
        assert_eq!(recoded.image(w01), expected.as_slice());
        assert_eq!(recoded.length(), 3);
    }

    #[test]
    fn sliding_block_illegal_window_errors() {
        let t = theta();
        // omit 11, which theta(01) = 011001 needs at offset 1
        let legal: BTreeSet<Word> = [vec![0, 0], vec![0, 1], vec![1, 0]].into();
        assert!(matches!(
            sliding_block_recode(&t, 2, &legal),
            Err(Error::IllegalWindow(_))
        ));
    }
}
