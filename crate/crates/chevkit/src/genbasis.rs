//! The generator pipeline: load explicit matrix generators (27×27 for e6,
//! 56×56 for e7), grow a basis by the fixed-point basis builder, and extract
//! abstract structure constants for cross-validation against the Chevalley
//! pipeline.
//!
//! The builder iterates the map H that adjoins to the current set the first
//! bracket product (row-major over the current elements) lying outside the
//! linear span, until no product escapes. Products use the Lie bracket
//! xy − yx, not the associative product.

use std::collections::HashSet;

use thiserror::Error;

use crate::chevalley::LieAlgebraFp;
use crate::gfp_linalg::{is_prime, mod_inverse};

#[derive(Debug, Error)]
pub enum GenBasisError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("generator set is linearly dependent")]
    DependentSet,
    #[error("{0} is not a prime in [2, 2^31)")]
    BadModulus(u64),
    #[error(
        "basis exceeded {0} elements; input is corrupted or not finite-dimensional as expected"
    )]
    BasisTooLarge(usize),
    #[error("bracket of basis elements {0} and {1} escapes the span; set is not bracket-closed")]
    BracketEscapesSpan(usize, usize),
    #[error("cannot read generator file: {0}")]
    Io(#[from] std::io::Error),
}

/// Square matrix over F_p in sparse row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    size: usize,
    /// rows[i] = sorted (column, value) pairs.
    rows: Vec<Vec<(u32, u64)>>,
}

impl SparseMat {
    pub fn zero(size: usize) -> Self {
        SparseMat {
            size,
            rows: vec![Vec::new(); size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i]
            .binary_search_by_key(&(j as u32), |&(c, _)| c)
            .map(|pos| self.rows[i][pos].1)
            .unwrap_or(0)
    }

    pub fn transpose(&self) -> SparseMat {
        let mut rows = vec![Vec::new(); self.size];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                rows[j as usize].push((i as u32, v));
            }
        }
        for r in &mut rows {
            r.sort_unstable_by_key(|&(c, _)| c);
        }
        SparseMat {
            size: self.size,
            rows,
        }
    }

    /// Lie bracket self·other − other·self over F_p.
    fn bracket(&self, other: &SparseMat, p: u64) -> SparseMat {
        let s = self.size;
        let mut out = SparseMat::zero(s);
        let mut scratch = vec![0u64; s];
        let mut touched: Vec<u32> = Vec::new();
        for i in 0..s {
            for &(k, a) in &self.rows[i] {
                for &(j, b) in &other.rows[k as usize] {
                    let cell = &mut scratch[j as usize];
                    if *cell == 0 {
                        touched.push(j);
                    }
                    *cell = (*cell + a * b) % p;
                }
            }
            for &(k, b) in &other.rows[i] {
                for &(j, a) in &self.rows[k as usize] {
                    let cell = &mut scratch[j as usize];
                    if *cell == 0 {
                        touched.push(j);
                    }
                    *cell = (*cell + b * (p - a)) % p;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                let v = scratch[j as usize];
                if v != 0 {
                    out.rows[i].push((j, v));
                    scratch[j as usize] = 0;
                }
            }
            touched.clear();
        }
        out
    }

    /// Row-major flattening into a dense vector of length size².
    fn vectorize_into(&self, dense: &mut [u64]) {
        dense.iter_mut().for_each(|x| *x = 0);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                dense[i * self.size + j as usize] = v;
            }
        }
    }
}

/// The parsed generator matrices of one input file.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    p: u64,
    size: usize,
    mats: Vec<SparseMat>,
}

impl GeneratorSet {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[SparseMat] {
        &self.mats
    }
}

/// The built-in generator files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorFile {
    E6,
    E7,
    /// The e7 list with the defective fifth-generator entry (24,23)
    /// corrected to (24,27) — the unique reading under which the generated
    /// algebra closes at dimension 133; the uncorrected list does not close.
    E7Alt,
}

impl GeneratorFile {
    pub fn file_name(self) -> &'static str {
        match self {
            GeneratorFile::E6 => "e6_generators.txt",
            GeneratorFile::E7 => "e7_generators.txt",
            GeneratorFile::E7Alt => "e7_generators_alt.txt",
        }
    }

    pub fn builtin_text(self) -> &'static str {
        match self {
            GeneratorFile::E6 => include_str!("../data/e6_generators.txt"),
            GeneratorFile::E7 => include_str!("../data/e7_generators.txt"),
            GeneratorFile::E7Alt => include_str!("../data/e7_generators_alt.txt"),
        }
    }
}

/// Text of a generator file, honoring the `CHEVKIT_DATA_DIR` override.
pub fn generator_source(which: GeneratorFile) -> Result<String, GenBasisError> {
    match std::env::var_os("CHEVKIT_DATA_DIR") {
        Some(dir) => {
            let path = std::path::Path::new(&dir).join(which.file_name());
            Ok(std::fs::read_to_string(path)?)
        }
        None => Ok(which.builtin_text().to_string()),
    }
}

/// Parses a generator file: header `order n`, then one block per generator
/// (`gen k` followed by `i j` lines, 1-based, each an elementary matrix with
/// unit coefficient). Verifies linear independence of the parsed set.
pub fn load_generators(text: &str, p: u64) -> Result<GeneratorSet, GenBasisError> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(GenBasisError::BadModulus(p));
    }
    let mut size: Option<usize> = None;
    let mut mats: Vec<SparseMat> = Vec::new();
    let mut entries_seen: HashSet<(u32, u32)> = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match (fields.as_slice(), size) {
            (["order", n], None) => {
                let n: usize = n.parse().map_err(|_| GenBasisError::Malformed {
                    line: line_no,
                    reason: format!("bad order '{n}'"),
                })?;
                if n == 0 {
                    return Err(GenBasisError::Malformed {
                        line: line_no,
                        reason: "order must be positive".into(),
                    });
                }
                size = Some(n);
            }
            (_, None) => {
                return Err(GenBasisError::Malformed {
                    line: line_no,
                    reason: "expected header 'order n'".into(),
                })
            }
            (["gen", k], Some(n)) => {
                let k: usize = k.parse().map_err(|_| GenBasisError::Malformed {
                    line: line_no,
                    reason: format!("bad generator number '{k}'"),
                })?;
                if k != mats.len() + 1 {
                    return Err(GenBasisError::Malformed {
                        line: line_no,
                        reason: format!("expected 'gen {}', found 'gen {k}'", mats.len() + 1),
                    });
                }
                mats.push(SparseMat::zero(n));
                entries_seen.clear();
            }
            ([i, j], Some(n)) => {
                let parse = |s: &str| -> Result<usize, GenBasisError> {
                    s.parse().map_err(|_| GenBasisError::Malformed {
                        line: line_no,
                        reason: format!("bad index '{s}'"),
                    })
                };
                let (i, j) = (parse(i)?, parse(j)?);
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(GenBasisError::Malformed {
                        line: line_no,
                        reason: format!("entry ({i},{j}) out of range 1..={n}"),
                    });
                }
                let Some(mat) = mats.last_mut() else {
                    return Err(GenBasisError::Malformed {
                        line: line_no,
                        reason: "entry before any 'gen k' line".into(),
                    });
                };
                if !entries_seen.insert((i as u32, j as u32)) {
                    return Err(GenBasisError::Malformed {
                        line: line_no,
                        reason: format!("duplicate entry ({i},{j})"),
                    });
                }
                mat.rows[i - 1].push((j as u32 - 1, 1));
            }
            _ => {
                return Err(GenBasisError::Malformed {
                    line: line_no,
                    reason: format!("unrecognized line '{line}'"),
                })
            }
        }
    }
    let size = size.ok_or(GenBasisError::Malformed {
        line: 0,
        reason: "empty file".into(),
    })?;
    if mats.is_empty() || mats.iter().any(|m| m.nnz() == 0) {
        return Err(GenBasisError::Malformed {
            line: 0,
            reason: "every generator needs at least one entry".into(),
        });
    }
    for m in &mut mats {
        for r in &mut m.rows {
            r.sort_unstable_by_key(|&(c, _)| c);
        }
    }
    // Independence of the vectorized generators.
    let mut tracker = Echelon::new(p, size * size);
    let mut dense = vec![0u64; size * size];
    for m in &mats {
        m.vectorize_into(&mut dense);
        if !tracker.insert(&dense) {
            return Err(GenBasisError::DependentSet);
        }
    }
    Ok(GeneratorSet { p, size, mats })
}

/// Incremental reduced echelon form over F_p on dense vectors.
struct Echelon {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    scratch: Vec<u64>,
}

impl Echelon {
    fn new(p: u64, width: usize) -> Self {
        Echelon {
            p,
            rows: Vec::new(),
            pivots: Vec::new(),
            scratch: vec![0; width],
        }
    }

    /// Reduces v against the rows; leaves the residual in `scratch` and
    /// returns its leading position, or None if v is in the span.
    fn reduce(&mut self, v: &[u64]) -> Option<usize> {
        let p = self.p;
        self.scratch.copy_from_slice(v);
        for (row, &pivot) in self.rows.iter().zip(&self.pivots) {
            let c = self.scratch[pivot];
            if c != 0 {
                let mult = p - c;
                for (s, &r) in self.scratch.iter_mut().zip(row) {
                    *s = (*s + mult * r) % p;
                }
            }
        }
        self.scratch.iter().position(|&x| x != 0)
    }

    /// Reduces and, if independent, installs the residual. Returns whether
    /// the vector was independent.
    fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let Some(pivot) = self.reduce(v) else {
            return false;
        };
        let inv = mod_inverse(self.scratch[pivot], p);
        let mut row: Vec<u64> = self.scratch.iter().map(|&x| x * inv % p).collect();
        std::mem::swap(&mut row, &mut self.scratch);
        let new_row = std::mem::replace(&mut self.scratch, row);
        // new_row is the normalized residual; clear its pivot column from
        // the existing rows to keep the form fully reduced.
        for r in &mut self.rows {
            let c = r[pivot];
            if c != 0 {
                let mult = p - c;
                for (x, &nv) in r.iter_mut().zip(&new_row) {
                    *x = (*x + mult * nv) % p;
                }
            }
        }
        self.rows.push(new_row);
        self.pivots.push(pivot);
        self.scratch.iter_mut().for_each(|x| *x = 0);
        true
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// A bracket-closed, linearly independent list of matrices.
#[derive(Debug, Clone)]
pub struct MatrixBasis {
    p: u64,
    size: usize,
    elements: Vec<SparseMat>,
}

impl MatrixBasis {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SparseMat] {
        &self.elements
    }

    #[cfg(test)]
    pub(crate) fn from_elements_unchecked(p: u64, size: usize, elements: Vec<SparseMat>) -> Self {
        MatrixBasis { p, size, elements }
    }
}

/// Runs the basis builder to its fixed point: repeatedly adjoin the first
/// bracket product (row-major scan over the current list) outside the span.
///
/// `limit` caps the basis size (default size², the ambient dimension);
/// exceeding it means the input does not generate the expected algebra.
pub fn basis_builder(s: &GeneratorSet, limit: Option<usize>) -> Result<MatrixBasis, GenBasisError> {
    let p = s.p;
    let size = s.size;
    let cap = limit.unwrap_or(size * size);
    let mut elements: Vec<SparseMat> = s.mats.clone();
    if elements.len() > cap {
        return Err(GenBasisError::BasisTooLarge(cap));
    }
    let mut tracker = Echelon::new(p, size * size);
    let mut dense = vec![0u64; size * size];
    for m in &elements {
        m.vectorize_into(&mut dense);
        if !tracker.insert(&dense) {
            return Err(GenBasisError::DependentSet);
        }
    }
    // Products once seen inside the span stay inside it as the span grows,
    // so each pair is bracketed at most once across all restarts.
    let mut in_span: HashSet<(u32, u32)> = HashSet::new();
    'rescan: loop {
        let m = elements.len();
        for a in 0..m {
            for b in 0..m {
                if a == b || in_span.contains(&(a as u32, b as u32)) {
                    continue;
                }
                let prod = elements[a].bracket(&elements[b], p);
                prod.vectorize_into(&mut dense);
                if tracker.insert(&dense) {
                    if elements.len() + 1 > cap {
                        return Err(GenBasisError::BasisTooLarge(cap));
                    }
                    elements.push(prod);
                    in_span.insert((a as u32, b as u32));
                    continue 'rescan;
                }
                in_span.insert((a as u32, b as u32));
            }
        }
        break;
    }
    debug_assert_eq!(tracker.len(), elements.len());
    Ok(MatrixBasis { p, size, elements })
}

/// Expresses every bracket [b_i, b_j] in coordinates over the basis,
/// yielding an abstract structure-constant table. The basis must be
/// bracket-closed (guaranteed by the builder's fixed point).
pub fn abstract_from_matrix_basis(b: &MatrixBasis) -> Result<LieAlgebraFp, GenBasisError> {
    let p = b.p;
    let m = b.elements.len();
    let s2 = b.size * b.size;

    // Augmented reduction [E | I] -> [R | T] with R = T·E in reduced form.
    let width = s2 + m;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(m);
    for (i, el) in b.elements.iter().enumerate() {
        let mut row = vec![0u64; width];
        el.vectorize_into(row[..s2].as_mut());
        row[s2 + i] = 1;
        rows.push(row);
    }
    let mut pivots: Vec<usize> = Vec::with_capacity(m);
    for r in 0..m {
        let mut pivot = None;
        'cols: for c in 0..s2 {
            for rr in r..m {
                if rows[rr][c] != 0 {
                    rows.swap(r, rr);
                    pivot = Some(c);
                    break 'cols;
                }
            }
        }
        let Some(pivot) = pivot else {
            return Err(GenBasisError::DependentSet);
        };
        let inv = mod_inverse(rows[r][pivot], p);
        for x in &mut rows[r] {
            *x = *x * inv % p;
        }
        let pivot_row = rows[r].clone();
        for (rr, row) in rows.iter_mut().enumerate() {
            if rr == r {
                continue;
            }
            let c = row[pivot];
            if c != 0 {
                let mult = p - c;
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + mult * pv) % p;
                }
            }
        }
        pivots.push(pivot);
    }

    let mut entries: Vec<(usize, usize, usize, u64)> = Vec::new();
    let mut dense = vec![0u64; s2];
    let mut residual = vec![0u64; s2];
    for i in 0..m {
        for j in (i + 1)..m {
            let prod = b.elements[i].bracket(&b.elements[j], p);
            prod.vectorize_into(&mut dense);
            // Coordinates over the echelon rows are direct pivot reads.
            let mu: Vec<u64> = pivots.iter().map(|&pc| dense[pc]).collect();
            residual.copy_from_slice(&dense);
            for (k, &mk) in mu.iter().enumerate() {
                if mk != 0 {
                    let mult = p - mk;
                    for (x, &rv) in residual.iter_mut().zip(&rows[k][..s2]) {
                        *x = (*x + mult * rv) % p;
                    }
                }
            }
            if residual.iter().any(|&x| x != 0) {
                return Err(GenBasisError::BracketEscapesSpan(i, j));
            }
            for t in 0..m {
                let mut c = 0u64;
                for (k, &mk) in mu.iter().enumerate() {
                    if mk != 0 {
                        c = (c + mk * rows[k][s2 + t]) % p;
                    }
                }
                if c != 0 {
                    entries.push((i, j, t, c));
                }
            }
        }
    }
    LieAlgebraFp::from_table(p, m, &entries, None).map_err(|e| GenBasisError::Malformed {
        line: 0,
        reason: e.to_string(),
    })
}
