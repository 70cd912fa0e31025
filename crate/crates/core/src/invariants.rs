//! Exact homological algebra: Euler characteristics with compact support,
//! the mod-2 boundary map of the n = 2 gluing, and integral homology via
//! Smith normal form.

use std::collections::BTreeMap;

use num::rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::extended_gcd;
use crate::strata::{count_components, StratumClass, TorusKnot};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantsError {
    #[error("the closed formula produced a non-integer for ({n},{m})")]
    NonIntegerResult { n: i64, m: i64 },
    #[error("m = {0} must be odd and >= 3")]
    EvenM(i64),
    #[error("k = 0 mod m names a reducible datum, not a meridian")]
    ZeroClass,
    #[error("boundary map not surjective over F2 for m = {m}: rank {rank} < {expected}")]
    SurjectivityFailure { m: i64, rank: usize, expected: usize },
    #[error("integer overflow during exact elimination")]
    Overflow,
}

/// chi_c of the SU(3) character variety by the closed formula
/// 1 + (n-1)(m-1)((n+m-4)/2 + 5(n-2)(m-2)/12), evaluated exactly.
pub fn chi_formula(knot: &TorusKnot) -> Result<i64, InvariantsError> {
    let (n, m) = (knot.n(), knot.m());
    let chi = Rational64::from_integer(1)
        + Rational64::from_integer((n - 1) * (m - 1))
            * (Rational64::new(n + m - 4, 2) + Rational64::new(5 * (n - 2) * (m - 2), 12));
    if !chi.is_integer() {
        return Err(InvariantsError::NonIntegerResult { n, m });
    }
    Ok(chi.to_integer())
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerReport {
    pub per_class: BTreeMap<String, i64>,
    pub total: i64,
}

/// chi_c contribution of each class: 1 for the totally reducible triangle,
/// 0 per open cylinder or Moebius band, 5 per (3a) block, 1 per (3b)
/// triangle.
pub fn chi_per_component(class: StratumClass) -> i64 {
    match class {
        StratumClass::Tr => 1,
        StratumClass::PartialCylinder | StratumClass::PartialMobius => 0,
        StratumClass::Irr3a => 5,
        StratumClass::Irr3bA | StratumClass::Irr3bB => 1,
    }
}

/// Stratum-by-stratum sum of chi_c, the counterpart of [`chi_formula`].
pub fn chi_strata(knot: &TorusKnot) -> EulerReport {
    let mut per_class = BTreeMap::new();
    let mut total = 0;
    for class in StratumClass::ALL {
        let contribution = chi_per_component(class) * count_components(knot, class);
        per_class.insert(format!("{class:?}"), contribution);
        total += contribution;
    }
    EulerReport { per_class, total }
}

/// Canonical index of the meridian l_k of a collapsed Moebius band:
/// l_{-k} = l_k, so the representative is min(k, m-k) in 1..=(m-1)/2.
pub fn meridian_class(k: i64, m: i64) -> Result<i64, InvariantsError> {
    let k = k.rem_euclid(m);
    if k == 0 {
        return Err(InvariantsError::ZeroClass);
    }
    Ok(k.min(m - k))
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// Bit-packed matrix over the two-element field.
#[derive(Debug, Clone)]
pub struct F2Matrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        F2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.flip(i, i);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.words, src * self.words);
        for w in 0..self.words {
            let v = self.data[s + w];
            self.data[d + w] ^= v;
        }
    }
}

/// Rank over F2 by bit-packed row elimination.
pub fn f2_rank(m: &F2Matrix) -> usize {
    let mut m = m.clone();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
            continue;
        };
        if pivot != rank {
            for w in 0..m.words {
                m.data.swap(rank * m.words + w, pivot * m.words + w);
            }
        }
        for r in 0..m.rows {
            if r != rank && m.get(r, col) {
                m.xor_rows(r, rank);
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

/// Indices {a, b} of the type-(3b) triangles for n = 2: unordered pairs of
/// distinct residues in 1..=m-1, in lexicographic order.
pub fn triangle_pairs(m: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for a in 1..m {
        for b in (a + 1)..m {
            out.push((a, b));
        }
    }
    out
}

/// Multiplicity with which the boundary of triangle {a, b} wraps each
/// meridian class: hits at classes of a, b and a-b.
fn column_multiplicities(a: i64, b: i64, m: i64) -> Vec<(usize, i64)> {
    let n1 = ((m - 1) / 2) as usize;
    let mut mult = vec![0i64; n1];
    for x in [a, b, a - b] {
        let c = meridian_class(x, m).expect("a, b, a-b nonzero mod m") as usize;
        mult[c - 1] += 1;
    }
    mult.into_iter().enumerate().filter(|&(_, v)| v != 0).collect()
}

/// The mod-2 boundary map f sending triangle {a, b} to l_a + l_b + l_{a-b}:
/// (m-1)/2 rows of meridian classes, (m-1)(m-2)/2 columns of triangles.
pub fn build_f_matrix(m: i64) -> Result<F2Matrix, InvariantsError> {
    if m < 3 || m % 2 == 0 {
        return Err(InvariantsError::EvenM(m));
    }
    let pairs = triangle_pairs(m);
    let mut f = F2Matrix::zeros(((m - 1) / 2) as usize, pairs.len());
    for (j, &(a, b)) in pairs.iter().enumerate() {
        for (row, mult) in column_multiplicities(a, b, m) {
            if mult % 2 == 1 {
                f.flip(row, j);
            }
        }
    }
    Ok(f)
}

/// Integer lift of the boundary map, with entries counting meridian hits
/// (0..=3) before mod-2 reduction.
pub fn build_f_int(m: i64) -> Result<IntMatrix, InvariantsError> {
    if m < 3 || m % 2 == 0 {
        return Err(InvariantsError::EvenM(m));
    }
    let pairs = triangle_pairs(m);
    let mut f = IntMatrix::zeros(((m - 1) / 2) as usize, pairs.len());
    for (j, &(a, b)) in pairs.iter().enumerate() {
        for (row, mult) in column_multiplicities(a, b, m) {
            f.set(row, j, mult);
        }
    }
    Ok(f)
}

fn checked_row_op(
    data: &mut [Vec<i64>],
    dst: usize,
    src: usize,
    factor: i64,
) -> Result<(), InvariantsError> {
    let (a, b) = if dst < src {
        let (lo, hi) = data.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = data.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x = factor
            .checked_mul(*y)
            .and_then(|p| x.checked_add(p))
            .ok_or(InvariantsError::Overflow)?;
    }
    Ok(())
}

/// Invariant factors d_1 | d_2 | ... of an integer matrix, computed by
/// exact row/column reduction with smallest-absolute-value pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> Result<Vec<i64>, InvariantsError> {
    let mut a: Vec<Vec<i64>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j)).collect())
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        // smallest nonzero entry of the trailing submatrix becomes the pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    checked_row_op(&mut a, i, t, -q)?;
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    for row in a.iter_mut() {
                        let p = q.checked_mul(row[t]).ok_or(InvariantsError::Overflow)?;
                        row[j] = row[j].checked_sub(p).ok_or(InvariantsError::Overflow)?;
                    }
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // enforce divisibility of the remaining block by the pivot
        let p = a[t][t].abs();
        if let Some(bad) = ((t + 1)..rows).find(|&i| ((t + 1)..cols).any(|j| a[i][j] % p != 0)) {
            checked_row_op(&mut a, t, bad, 1)?;
            continue;
        }
        factors.push(p);
        t += 1;
    }
    debug_assert!(factors.windows(2).all(|w| w[1] % w[0] == 0));
    Ok(factors)
}

/// Basis of the lattice spanned by the columns, kept in column echelon form
/// with one pivot per leading row. Columns are inserted one at a time so
/// very wide matrices never need to be materialized in full.
pub struct ColumnLattice {
    rows: usize,
    basis: Vec<Option<Vec<i64>>>,
}

impl ColumnLattice {
    pub fn new(rows: usize) -> Self {
        ColumnLattice { rows, basis: vec![None; rows] }
    }

    pub fn insert(&mut self, mut col: Vec<i64>) -> Result<(), InvariantsError> {
        assert_eq!(col.len(), self.rows);
        for r in 0..self.rows {
            if col[r] == 0 {
                continue;
            }
            match &mut self.basis[r] {
                Some(b) => {
                    let (g, x, y) = extended_gcd(b[r], col[r]);
                    let (bp, cp) = (b[r] / g, col[r] / g);
                    let mut combined = vec![0i64; self.rows];
                    for i in r..self.rows {
                        let xb = x.checked_mul(b[i]).ok_or(InvariantsError::Overflow)?;
                        let yc = y.checked_mul(col[i]).ok_or(InvariantsError::Overflow)?;
                        combined[i] = xb.checked_add(yc).ok_or(InvariantsError::Overflow)?;
                        let t1 = bp.checked_mul(col[i]).ok_or(InvariantsError::Overflow)?;
                        let t2 = cp.checked_mul(b[i]).ok_or(InvariantsError::Overflow)?;
                        col[i] = t1.checked_sub(t2).ok_or(InvariantsError::Overflow)?;
                    }
                    *b = combined;
                    debug_assert_eq!(col[r], 0);
                }
                slot @ None => {
                    *slot = Some(col);
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// True when the basis is complete with all pivots of absolute value 1:
    /// the column span is then the full lattice (lower-triangular basis of
    /// determinant +-1) and the cokernel is trivial.
    pub fn is_unimodular(&self) -> bool {
        self.basis
            .iter()
            .enumerate()
            .all(|(r, b)| b.as_ref().is_some_and(|b| b[r].abs() == 1))
    }

    /// Square generating matrix of the lattice (zero columns for rows
    /// without a pivot).
    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.rows);
        for (j, b) in self.basis.iter().enumerate() {
            if let Some(b) = b {
                for i in 0..self.rows {
                    m.set(i, j, b[i]);
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub betti: Vec<i64>,
    pub torsion: Vec<Vec<i64>>,
}

/// Integral homology of the SU(3) character variety for n = 2 and odd m,
/// computed from the Mayer-Vietoris boundary data: H1 is the cokernel of
/// the integer lift [F | 2*Id] and H2 the kernel of f, free of rank N2.
pub fn homology_n2(m: i64) -> Result<HomologyProfile, InvariantsError> {
    let f2 = build_f_matrix(m)?;
    let n1 = f2.rows;
    let n2 = f2.cols;
    let rank = f2_rank(&f2);
    if rank != n1 {
        return Err(InvariantsError::SurjectivityFailure { m, rank, expected: n1 });
    }
    // cokernel of [F | 2*Id] over Z: fold all columns into a lattice basis.
    // The doubled identity goes in first (it bounds entry growth); once the
    // basis turns unimodular the remaining columns cannot change anything.
    let fint = build_f_int(m)?;
    let mut lattice = ColumnLattice::new(n1);
    for i in 0..n1 {
        let mut col = vec![0i64; n1];
        col[i] = 2;
        lattice.insert(col)?;
    }
    for j in 0..n2 {
        lattice.insert(fint.column(j))?;
        if j % 32 == 0 && lattice.is_unimodular() {
            break;
        }
    }
    let factors = if lattice.is_unimodular() {
        vec![1; n1]
    } else {
        smith_normal_form(&lattice.to_matrix())?
    };
    let b1 = (n1 - factors.len()) as i64;
    let torsion1: Vec<i64> = factors.into_iter().filter(|&d| d > 1).collect();
    // H2 = Ker(f) is a finite-index sublattice of Z^{N2}, hence free of
    // full rank and torsion-free
    Ok(HomologyProfile {
        betti: vec![1, b1, n2 as i64],
        torsion: vec![vec![], torsion1, vec![]],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knot(n: i64, m: i64) -> TorusKnot {
        TorusKnot::new(n, m).unwrap()
    }

    #[test]
    fn chi_formula_spot_values() {
        assert_eq!(chi_formula(&knot(2, 3)).unwrap(), 2);
        assert_eq!(chi_formula(&knot(2, 5)).unwrap(), 7);
        assert_eq!(chi_formula(&knot(3, 5)).unwrap(), 27);
    }

    #[test]
    fn chi_strata_breakdown() {
        let report = chi_strata(&knot(3, 5));
        assert_eq!(report.per_class["Tr"], 1);
        assert_eq!(report.per_class["PartialCylinder"], 0);
        assert_eq!(report.per_class["Irr3a"], 10);
        assert_eq!(report.per_class["Irr3bA"] + report.per_class["Irr3bB"], 16);
        assert_eq!(report.total, 27);
        assert_eq!(chi_strata(&knot(2, 5)).total, 7);
        assert_eq!(chi_strata(&knot(2, 3)).total, 2);
    }

    #[test]
    fn meridian_class_examples() {
        assert_eq!(meridian_class(4, 5).unwrap(), 1);
        assert_eq!(meridian_class(2, 5).unwrap(), 2);
        assert_eq!(meridian_class(7, 5).unwrap(), 2);
        assert_eq!(meridian_class(5, 5), Err(InvariantsError::ZeroClass));
    }

    #[test]
    fn f_matrix_columns_by_hand() {
        // m = 5: meridian classes l1, l2; columns in lexicographic pair order
        let f = build_f_matrix(5).unwrap();
        assert_eq!(f.rows, 2);
        assert_eq!(f.cols, 6);
        let pairs = triangle_pairs(5);
        let j13 = pairs.iter().position(|&p| p == (1, 3)).unwrap();
        // {1,3}: l1 + l3 + l_{-2} = l1 + l2 + l2 = l1
        assert!(f.get(0, j13) && !f.get(1, j13));
        let j12 = pairs.iter().position(|&p| p == (1, 2)).unwrap();
        // {1,2}: l1 + l2 + l_{-1} = l2
        assert!(!f.get(0, j12) && f.get(1, j12));
    }

    #[test]
    fn f_matrix_m3() {
        let f = build_f_matrix(3).unwrap();
        assert_eq!((f.rows, f.cols), (1, 1));
        assert!(f.get(0, 0));
        assert!(build_f_matrix(4).is_err());
    }

    #[test]
    fn f2_rank_basics() {
        assert_eq!(f2_rank(&F2Matrix::identity(3)), 3);
        assert_eq!(f2_rank(&F2Matrix::zeros(2, 4)), 0);
        assert_eq!(f2_rank(&build_f_matrix(5).unwrap()), 2);
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 6]]);
        assert_eq!(smith_normal_form(&m).unwrap(), vec![2, 6]);
        let m = IntMatrix::from_rows(vec![vec![2, 4], vec![6, 10]]);
        assert_eq!(smith_normal_form(&m).unwrap(), vec![2, 2]);
        let m = IntMatrix::zeros(3, 2);
        assert_eq!(smith_normal_form(&m).unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn column_lattice_preserves_invariant_factors() {
        let m = IntMatrix::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let direct = smith_normal_form(&m).unwrap();
        let mut lat = ColumnLattice::new(3);
        for j in 0..3 {
            lat.insert(m.column(j)).unwrap();
        }
        let via_lattice = smith_normal_form(&lat.to_matrix()).unwrap();
        assert_eq!(direct, via_lattice);
    }

    #[test]
    fn homology_small_m() {
        assert_eq!(
            homology_n2(3).unwrap(),
            HomologyProfile { betti: vec![1, 0, 1], torsion: vec![vec![], vec![], vec![]] }
        );
        assert_eq!(homology_n2(5).unwrap().betti, vec![1, 0, 6]);
        assert_eq!(homology_n2(7).unwrap().betti, vec![1, 0, 15]);
        assert!(homology_n2(6).is_err());
    }
}
