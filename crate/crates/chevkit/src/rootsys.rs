//! Root systems of the exceptional types G2, F4, E6, E7, E8.
//!
//! Roots are integer coordinate vectors in the simple-root basis; all inner
//! products are recovered from the Cartan matrix and a diagonal symmetrizer,
//! so everything stays in exact integer arithmetic.
//!
//! Conventions: the Cartan matrix entry is `a[i][j] = <α_i, α_j> =
//! 2(α_i,α_j)/(α_j,α_j)` and node numbering follows the Bourbaki tables
//! (G2: α_1 short; F4: α_1, α_2 long; E-series: node 2 attached to node 4 of
//! the chain 1–3–4–5–...).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five exceptional types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LieType {
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl LieType {
    pub const ALL: [LieType; 5] = [
        LieType::G2,
        LieType::F4,
        LieType::E6,
        LieType::E7,
        LieType::E8,
    ];

    pub fn rank(self) -> usize {
        match self {
            LieType::G2 => 2,
            LieType::F4 => 4,
            LieType::E6 => 6,
            LieType::E7 => 7,
            LieType::E8 => 8,
        }
    }

    pub fn root_count(self) -> usize {
        match self {
            LieType::G2 => 12,
            LieType::F4 => 48,
            LieType::E6 => 72,
            LieType::E7 => 126,
            LieType::E8 => 240,
        }
    }

    /// Dimension of the algebra: rank + number of roots.
    pub fn dim(self) -> usize {
        self.rank() + self.root_count()
    }

    pub fn name(self) -> &'static str {
        match self {
            LieType::G2 => "g2",
            LieType::F4 => "f4",
            LieType::E6 => "e6",
            LieType::E7 => "e7",
            LieType::E8 => "e8",
        }
    }

    /// Characteristics in which the Killing form degenerates; the cases the
    /// derivation question is open to begin with.
    pub fn relevant_primes(self) -> &'static [u64] {
        match self {
            LieType::E8 => &[2, 3, 5],
            _ => &[2, 3],
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for LieType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "g2" => Ok(LieType::G2),
            "f4" => Ok(LieType::F4),
            "e6" => Ok(LieType::E6),
            "e7" => Ok(LieType::E7),
            "e8" => Ok(LieType::E8),
            other => Err(format!(
                "unknown algebra '{other}' (expected g2, f4, e6, e7 or e8)"
            )),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("matrix is not a Cartan matrix: {0}")]
    NotCartan(String),
    #[error("Cartan matrix is not of exceptional type (rank {rank}, {roots} roots)")]
    NotExceptional { rank: usize, roots: usize },
    #[error("vector is not a root of this system")]
    NotARoot,
    #[error("roots are dependent (β = ±α), the α-string is undefined")]
    DependentRoots,
}

/// A root as an integer vector in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<i64>,
    pub height: i64,
    pub positive: bool,
}

impl Root {
    fn new(coords: Vec<i64>) -> Self {
        let height = coords.iter().sum();
        let positive = coords.iter().all(|&c| c >= 0) && height > 0;
        Root {
            coords,
            height,
            positive,
        }
    }
}

/// Cartan matrix of an exceptional type, `a[i][j] = <α_i, α_j>`.
pub fn cartan_matrix(t: LieType) -> Vec<Vec<i64>> {
    let r = t.rank();
    let mut a = vec![vec![0i64; r]; r];
    for i in 0..r {
        a[i][i] = 2;
    }
    let mut edge = |i: usize, j: usize, v: i64, w: i64| {
        a[i - 1][j - 1] = v;
        a[j - 1][i - 1] = w;
    };
    match t {
        LieType::G2 => {
            // α_1 short, α_2 long: <α_1,α_2> = -1, <α_2,α_1> = -3.
            edge(1, 2, -1, -3);
        }
        LieType::F4 => {
            edge(1, 2, -1, -1);
            // α_2 long, α_3 short: <α_2,α_3> = -2, <α_3,α_2> = -1.
            edge(2, 3, -2, -1);
            edge(3, 4, -1, -1);
        }
        LieType::E6 | LieType::E7 | LieType::E8 => {
            let chain: &[usize] = match t {
                LieType::E6 => &[1, 3, 4, 5, 6],
                LieType::E7 => &[1, 3, 4, 5, 6, 7],
                _ => &[1, 3, 4, 5, 6, 7, 8],
            };
            for w in chain.windows(2) {
                edge(w[0], w[1], -1, -1);
            }
            edge(2, 4, -1, -1);
        }
    }
    a
}

/// A full exceptional root system: ordered root list plus pairing machinery.
///
/// Positive roots come first, sorted by (height, lexicographic coordinates);
/// their negatives follow in the same relative order, so root `i + |Φ+|` is
/// the negative of root `i`.
#[derive(Debug, Clone)]
pub struct RootSystem {
    lie_type: LieType,
    cartan: Vec<Vec<i64>>,
    /// Symmetrizer: minimal positive integers d with d_j·a[i][j] = d_i·a[j][i];
    /// (α_i, α_i) is proportional to 2·d_i.
    sym: Vec<i64>,
    roots: Vec<Root>,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    /// Builds the root system of a named exceptional type.
    pub fn new(t: LieType) -> Self {
        Self::generate(&cartan_matrix(t)).expect("built-in Cartan matrices are valid")
    }

    /// Generates the root system of an exceptional Cartan matrix, rejecting
    /// matrices that violate the Cartan conditions or are of other types.
    pub fn generate(cartan: &[Vec<i64>]) -> Result<Self, RootSystemError> {
        let r = cartan.len();
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != r {
                return Err(RootSystemError::NotCartan("matrix is not square".into()));
            }
            if row[i] != 2 {
                return Err(RootSystemError::NotCartan(format!(
                    "diagonal entry a[{}][{}] = {} (must be 2)",
                    i + 1,
                    i + 1,
                    row[i]
                )));
            }
            for j in 0..r {
                if i != j && row[j] > 0 {
                    return Err(RootSystemError::NotCartan(format!(
                        "off-diagonal entry a[{}][{}] = {} (must be ≤ 0)",
                        i + 1,
                        j + 1,
                        row[j]
                    )));
                }
                if (row[j] == 0) != (cartan[j][i] == 0) {
                    return Err(RootSystemError::NotCartan(format!(
                        "a[{}][{}] = 0 but a[{}][{}] ≠ 0",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let sym = symmetrizer(cartan)?;

        // Close the positive roots level by level: β + α_i is a root iff
        // d - <β, α_i> > 0, where d counts the known descents β - kα_i.
        let pairing_simple = |coords: &[i64], i: usize| -> i64 {
            coords
                .iter()
                .zip(cartan)
                .map(|(&c, row_j)| c * row_j[i])
                .sum::<i64>()
        };
        // Note: <β, α_i> = Σ_j β_j <α_j, α_i> = Σ_j β_j cartan[j][i].
        let mut positives: Vec<Vec<i64>> = Vec::new();
        let mut seen: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
        let mut level: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut c = vec![0i64; r];
                c[i] = 1;
                c
            })
            .collect();
        level.sort();
        for c in &level {
            seen.insert(c.clone());
        }
        let mut height = 1usize;
        while !level.is_empty() {
            if height > 40 || positives.len() > 240 {
                return Err(RootSystemError::NotExceptional {
                    rank: r,
                    roots: 2 * positives.len(),
                });
            }
            positives.extend(level.iter().cloned());
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &level {
                for i in 0..r {
                    let mut down = beta.clone();
                    let mut descents = 0i64;
                    loop {
                        down[i] -= 1;
                        let is_root = !down.iter().all(|&c| c == 0) && seen.contains(&down);
                        if is_root {
                            descents += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing = pairing_simple(beta, i);
                    if descents - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if seen.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            next.sort();
            next.dedup();
            level = next;
            height += 1;
        }

        let n_pos = positives.len();
        let lie_type = LieType::ALL
            .into_iter()
            .find(|t| t.rank() == r && t.root_count() == 2 * n_pos)
            .ok_or(RootSystemError::NotExceptional {
                rank: r,
                roots: 2 * n_pos,
            })?;

        let mut roots: Vec<Root> = positives.iter().cloned().map(Root::new).collect();
        roots.extend(
            positives
                .iter()
                .map(|c| Root::new(c.iter().map(|&x| -x).collect())),
        );
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, rt)| (rt.coords.clone(), i))
            .collect();
        let rs = RootSystem {
            lie_type,
            cartan: cartan.to_vec(),
            sym,
            roots,
            index,
        };

        // Rank and root count alone do not separate e6 from b6/c6 (both have
        // 72 roots at rank 6); the length census does.
        let mut lengths: HashMap<i64, usize> = HashMap::new();
        for i in 0..rs.num_roots() {
            *lengths.entry(rs.norm2(i)).or_insert(0) += 1;
        }
        let mut census: Vec<(i64, usize)> = lengths.into_iter().collect();
        census.sort_unstable();
        let short = census[0].0;
        let census_ok = match lie_type {
            LieType::E6 | LieType::E7 | LieType::E8 => census.len() == 1,
            LieType::G2 => {
                census.len() == 2
                    && census[1].0 == 3 * short
                    && census == [(short, 6), (3 * short, 6)]
            }
            LieType::F4 => {
                census.len() == 2
                    && census[1].0 == 2 * short
                    && census == [(short, 24), (2 * short, 24)]
            }
        };
        if !census_ok {
            return Err(RootSystemError::NotExceptional {
                rank: r,
                roots: 2 * n_pos,
            });
        }
        Ok(rs)
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    /// Index of a coordinate vector in the root list, if it is a root.
    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Index of -α given the index of α.
    pub fn neg(&self, i: usize) -> usize {
        let m = self.num_positive();
        if i < m {
            i + m
        } else {
            i - m
        }
    }

    pub fn is_simple(&self, i: usize) -> bool {
        self.roots[i].height == 1 && self.roots[i].positive
    }

    /// Squared length (α, α) up to the global symmetrizer scale.
    pub fn norm2(&self, i: usize) -> i64 {
        let c = &self.roots[i].coords;
        let mut acc = 0i64;
        for (a, row_a) in self.cartan.iter().enumerate() {
            for b in 0..self.rank() {
                acc += c[a] * c[b] * self.sym[b] * row_a[b];
            }
        }
        debug_assert!(acc > 0);
        acc
    }

    /// Symmetric product (α, β) up to the global symmetrizer scale.
    fn inner(&self, i: usize, j: usize) -> i64 {
        let ca = &self.roots[i].coords;
        let cb = &self.roots[j].coords;
        let mut acc = 0i64;
        for (a, row_a) in self.cartan.iter().enumerate() {
            for b in 0..self.rank() {
                acc += ca[a] * cb[b] * self.sym[b] * row_a[b];
            }
        }
        acc
    }

    /// Cartan pairing <α, β> = 2(α,β)/(β,β) for roots given by index.
    pub fn pairing(&self, alpha: usize, beta: usize) -> i64 {
        let num = 2 * self.inner(alpha, beta);
        let den = self.norm2(beta);
        debug_assert_eq!(num % den, 0, "pairing must be an integer");
        num / den
    }

    /// <α, α_i> against the i-th simple root, straight off the Cartan matrix.
    pub fn pairing_with_simple(&self, alpha: usize, i: usize) -> i64 {
        self.roots[alpha]
            .coords
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.cartan[j][i])
            .sum()
    }

    /// The α-string through β: returns (r, q) with β-rα, …, β+qα all roots.
    pub fn alpha_string(&self, alpha: usize, beta: usize) -> Result<(i64, i64), RootSystemError> {
        if alpha >= self.roots.len() || beta >= self.roots.len() {
            return Err(RootSystemError::NotARoot);
        }
        if beta == alpha || beta == self.neg(alpha) {
            return Err(RootSystemError::DependentRoots);
        }
        let a = &self.roots[alpha].coords;
        let b = &self.roots[beta].coords;
        let step = |k: i64| -> Vec<i64> { b.iter().zip(a).map(|(&bc, &ac)| bc + k * ac).collect() };
        let mut r = 0;
        while self.index.contains_key(&step(-(r + 1))) {
            r += 1;
        }
        let mut q = 0;
        while self.index.contains_key(&step(q + 1)) {
            q += 1;
        }
        Ok((r, q))
    }

    /// One root per line: signed coordinates, space-separated, positives first.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for rt in &self.roots {
            let line: Vec<String> = rt.coords.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Minimal positive integer diagonal d with d_j·a[i][j] = d_i·a[j][i].
fn symmetrizer(cartan: &[Vec<i64>]) -> Result<Vec<i64>, RootSystemError> {
    let r = cartan.len();
    // Rational d as num/den, propagated over the Dynkin graph.
    let mut num = vec![0i64; r];
    let mut den = vec![0i64; r];
    for start in 0..r {
        if den[start] != 0 {
            continue;
        }
        num[start] = 1;
        den[start] = 1;
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for j in 0..r {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                // d_j * a_ij = d_i * a_ji  =>  d_j = d_i * a_ji / a_ij
                let (n, d) = reduce_fraction(num[i] * cartan[j][i], den[i] * cartan[i][j]);
                if den[j] == 0 {
                    num[j] = n;
                    den[j] = d;
                    queue.push(j);
                } else if num[j] * d != n * den[j] {
                    return Err(RootSystemError::NotCartan(
                        "matrix is not symmetrizable".into(),
                    ));
                }
            }
        }
    }
    let lcm_den = den.iter().fold(1i64, |acc, &d| lcm(acc, d));
    let mut d: Vec<i64> = num
        .iter()
        .zip(&den)
        .map(|(&n, &dd)| n * (lcm_den / dd))
        .collect();
    if d.iter().any(|&x| x <= 0) {
        return Err(RootSystemError::NotCartan(
            "symmetrizer is not positive".into(),
        ));
    }
    let g = d.iter().fold(0i64, |acc, &x| gcd(acc, x));
    for x in &mut d {
        *x /= g;
    }
    Ok(d)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn reduce_fraction(n: i64, d: i64) -> (i64, i64) {
    let g = gcd(n, d);
    let sign = if d < 0 { -1 } else { 1 };
    (sign * n / g, sign * d / g)
}
