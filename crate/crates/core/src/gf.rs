//! Exact arithmetic in GF(p^k), Cauchy matrices, determinants, and square
//! system solving by Gaussian elimination.

use crate::combinat::{is_prime, prime_power};
use crate::error::{invalid, Error, Result};

/// A finite field GF(p^k) with an explicit monic irreducible polynomial.
/// Elements are canonical indices in 0..q: the element with coefficient
/// vector (c_0, ..., c_{k-1}) has index sum c_i * p^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldCtx {
    p: u64,
    k: u32,
    /// Monic modulus, coefficients low to high, length k+1, poly[k] = 1.
    poly: Vec<u64>,
    q: u64,
}

/// An element of a FieldCtx, stored as its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(pub u32);

impl FieldCtx {
    /// Field of order q = p^k with the first irreducible polynomial in
    /// canonical enumeration order.
    pub fn new(q: u64) -> Result<FieldCtx> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{} is not a prime power", q)))?;
        let poly = find_irreducible(p, k)?;
        FieldCtx::with_poly(p, k, poly)
    }

    /// Field with caller-supplied modulus, checked for irreducibility.
    pub fn with_poly(p: u64, k: u32, poly: Vec<u64>) -> Result<FieldCtx> {
        if !is_prime(p) {
            return invalid(format!("{} is not prime", p));
        }
        if k == 0 {
            return invalid("extension degree must be at least 1".to_string());
        }
        if poly.len() != k as usize + 1 || poly[k as usize] != 1 {
            return invalid("modulus must be monic of degree k".to_string());
        }
        if poly.iter().any(|&c| c >= p) {
            return invalid("modulus coefficients must be reduced mod p".to_string());
        }
        if !poly_is_irreducible(p, &poly) {
            return invalid(format!("polynomial {:?} is reducible over GF({})", poly, p));
        }
        let q = p.pow(k);
        if q > u32::MAX as u64 {
            return invalid("field order too large".to_string());
        }
        Ok(FieldCtx { p, k, poly, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn poly(&self) -> &[u64] {
        &self.poly
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// Element with the given canonical index.
    pub fn elem(&self, idx: u64) -> Result<FieldElem> {
        if idx >= self.q {
            return invalid(format!("index {} out of range for GF({})", idx, self.q));
        }
        Ok(FieldElem(idx as u32))
    }

    /// All field elements in canonical index order.
    pub fn elems(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u32).map(FieldElem)
    }

    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut x = a.0 as u64;
        for _ in 0..self.k {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.k as usize {
            return invalid("too many coefficients".to_string());
        }
        let mut idx = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p {
                return invalid("coefficient not reduced mod p".to_string());
            }
            idx += c * self.p.pow(i as u32);
        }
        self.elem(idx)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (pa, pb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u64> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % self.p).collect();
        self.from_coeffs(&sum).unwrap()
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let pa = self.coeffs(a);
        let neg: Vec<u64> = pa.iter().map(|&x| (self.p - x) % self.p).collect();
        self.from_coeffs(&neg).unwrap()
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (pa, pb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u64; 2 * self.k as usize];
        for (i, &x) in pa.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in pb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce modulo the monic modulus
        for d in (self.k as usize..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &m) in self.poly.iter().enumerate().take(self.k as usize) {
                let idx = d - self.k as usize + j;
                prod[idx] = (prod[idx] + c * (self.p - m)) % self.p;
            }
        }
        prod.truncate(self.k as usize);
        self.from_coeffs(&prod).unwrap()
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero { q: self.q });
        }
        Ok(self.pow(a, self.q - 2))
    }
}

/// First monic irreducible polynomial of degree k over GF(p), in the order
/// induced by the canonical element indexing of the low coefficients.
pub fn find_irreducible(p: u64, k: u32) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return invalid(format!("{} is not prime", p));
    }
    if k == 1 {
        return Ok(vec![0, 1]); // x
    }
    let q = p.pow(k);
    if q > 1 << 16 {
        return invalid(format!("no irreducible table beyond 2^16, got p^k = {}", q));
    }
    let mut lowers = 0u64;
    while lowers < q {
        let mut poly = Vec::with_capacity(k as usize + 1);
        let mut x = lowers;
        for _ in 0..k {
            poly.push(x % p);
            x /= p;
        }
        poly.push(1);
        if poly_is_irreducible(p, &poly) {
            return Ok(poly);
        }
        lowers += 1;
    }
    Err(Error::Internal(format!(
        "no irreducible polynomial of degree {} over GF({})",
        k, p
    )))
}

/// Irreducibility by trial division with all monic polynomials of degree
/// 1..=deg/2 over GF(p).
fn poly_is_irreducible(p: u64, poly: &[u64]) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for lowers in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut x = lowers;
            for _ in 0..d {
                div.push(x % p);
                x /= p;
            }
            div.push(1);
            if poly_divides(p, &div, poly) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(p: u64, div: &[u64], poly: &[u64]) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = div.len() - 1;
    while rem.len() >= div.len() {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            // divisor is monic, so the quotient coefficient is just `lead`
            let off = rem.len() - div.len();
            for (j, &c) in div.iter().enumerate().take(dd) {
                rem[off + j] = (rem[off + j] + lead * (p - c)) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Dense matrix over a FieldCtx, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, zero: FieldElem) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![zero; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return invalid("ragged matrix".to_string());
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    /// Keep the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::new(self.rows, cols.len(), FieldElem(0));
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    /// Drop the final row.
    pub fn drop_last_row(&self) -> Matrix {
        Matrix {
            rows: self.rows - 1,
            cols: self.cols,
            data: self.data[..(self.rows - 1) * self.cols].to_vec(),
        }
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[allow(clippy::needless_range_loop)]
    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for j in 0..self.cols {
                    acc = ctx.add(acc, ctx.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }
}

/// Cauchy matrix with entries (x_i - y_j)^{-1}; all of xs and ys must be
/// pairwise distinct.
pub fn cauchy(ctx: &FieldCtx, xs: &[FieldElem], ys: &[FieldElem]) -> Result<Matrix> {
    let mut all: Vec<FieldElem> = xs.iter().chain(ys).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return invalid("Cauchy generators must be pairwise distinct".to_string());
    }
    let mut m = Matrix::new(xs.len(), ys.len(), ctx.zero());
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            m.set(i, j, ctx.inv(ctx.sub(x, y))?);
        }
    }
    Ok(m)
}

/// Closed-form Cauchy determinant:
/// prod_{i<j} (x_j - x_i)(y_i - y_j) / prod_{i,j} (x_i - y_j).
pub fn cauchy_det(ctx: &FieldCtx, xs: &[FieldElem], ys: &[FieldElem]) -> Result<FieldElem> {
    if xs.len() != ys.len() {
        return invalid("Cauchy determinant needs square generator data".to_string());
    }
    let mut all: Vec<FieldElem> = xs.iter().chain(ys).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return invalid("Cauchy generators must be pairwise distinct".to_string());
    }
    let n = xs.len();
    let mut num = ctx.one();
    for i in 0..n {
        for j in i + 1..n {
            num = ctx.mul(num, ctx.sub(xs[j], xs[i]));
            num = ctx.mul(num, ctx.sub(ys[i], ys[j]));
        }
    }
    let mut den = ctx.one();
    for &x in xs {
        for &y in ys {
            den = ctx.mul(den, ctx.sub(x, y));
        }
    }
    Ok(ctx.mul(num, ctx.inv(den)?))
}

/// Determinant by Gaussian elimination (the cross-check route).
pub fn det_elimination(ctx: &FieldCtx, m: &Matrix) -> Result<FieldElem> {
    if m.rows != m.cols {
        return invalid("determinant of a non-square matrix".to_string());
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = ctx.one();
    for col in 0..n {
        let pivot = (col..n).find(|&i| a.get(i, col).0 != 0);
        let Some(pivot) = pivot else {
            return Ok(ctx.zero());
        };
        if pivot != col {
            for j in 0..n {
                let (x, y) = (a.get(col, j), a.get(pivot, j));
                a.set(col, j, y);
                a.set(pivot, j, x);
            }
            det = ctx.neg(det);
        }
        let pv = a.get(col, col);
        det = ctx.mul(det, pv);
        let inv = ctx.inv(pv)?;
        for i in col + 1..n {
            let factor = ctx.mul(a.get(i, col), inv);
            if factor.0 == 0 {
                continue;
            }
            for j in col..n {
                let v = ctx.sub(a.get(i, j), ctx.mul(factor, a.get(col, j)));
                a.set(i, j, v);
            }
        }
    }
    Ok(det)
}

/// Unique solution of A x = b for invertible square A.
#[allow(clippy::needless_range_loop)]
pub fn solve_square(ctx: &FieldCtx, a: &Matrix, b: &[FieldElem]) -> Result<Vec<FieldElem>> {
    if a.rows != a.cols {
        return invalid("solve_square needs a square matrix".to_string());
    }
    if a.rows != b.len() {
        return invalid("dimension mismatch".to_string());
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| m.get(i, col).0 != 0)
            .ok_or(Error::SingularMatrix)?;
        if pivot != col {
            for j in 0..n {
                let (x, y) = (m.get(col, j), m.get(pivot, j));
                m.set(col, j, y);
                m.set(pivot, j, x);
            }
            rhs.swap(col, pivot);
        }
        let inv = ctx.inv(m.get(col, col))?;
        for j in col..n {
            m.set(col, j, ctx.mul(m.get(col, j), inv));
        }
        rhs[col] = ctx.mul(rhs[col], inv);
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = m.get(i, col);
            if factor.0 == 0 {
                continue;
            }
            for j in col..n {
                let v = ctx.sub(m.get(i, j), ctx.mul(factor, m.get(col, j)));
                m.set(i, j, v);
            }
            rhs[i] = ctx.sub(rhs[i], ctx.mul(factor, rhs[col]));
        }
    }
    Ok(rhs)
}
