//! Exact linear algebra over ℚ on small dense systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntVector;

pub type Rational = BigRational;
pub type QVector = Vec<Rational>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qvec(c: &[i64]) -> QVector {
    c.iter().map(|&x| q(x)).collect()
}

pub fn zeros(n: usize) -> QVector {
    vec![Rational::zero(); n]
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], k: &Rational) -> QVector {
    a.iter().map(|x| x * k).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn to_f64(a: &[Rational]) -> Vec<f64> {
    a.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Exact conversion of a finite float into a rational.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Scales a rational vector to the primitive integer vector pointing the
/// same way. The zero vector maps to the zero vector.
pub fn primitive_int(a: &[Rational]) -> IntVector {
    let lcm = a.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = a.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return IntVector(ints);
    }
    IntVector(ints.into_iter().map(|c| c / &g).collect())
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot
/// columns. The result depends only on the row space of the input.
pub fn rref(rows: &[QVector], ncols: usize) -> (Vec<QVector>, Vec<usize>) {
    let mut m: Vec<QVector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row · x = 0 for every row}`.
pub fn kernel(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zeros(ncols);
            x[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Solves `rows · x = rhs` when the solution is unique; `None` otherwise
/// (inconsistent or underdetermined).
pub fn solve_unique(rows: &[QVector], rhs: &[Rational], ncols: usize) -> Option<QVector> {
    let aug: Vec<QVector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.contains(&ncols) || pivots.len() != ncols {
        return None;
    }
    Some(r.iter().map(|row| row[ncols].clone()).collect())
}

/// Canonical basis of a linear subspace: RREF rows scaled to primitive
/// integer vectors.
pub fn canonical_basis(rows: &[QVector], ncols: usize) -> Vec<IntVector> {
    rref(rows, ncols).0.iter().map(|r| primitive_int(r)).collect()
}

/// Reduces a point modulo the span of an RREF basis so that it is zero in
/// every pivot column. Two points differ by an element of the span iff
/// their reductions agree.
pub fn reduce_mod_span(x: &[Rational], rref_rows: &[QVector], pivots: &[usize]) -> QVector {
    let mut out = x.to_vec();
    for (row, &p) in rref_rows.iter().zip(pivots) {
        let f = out[p].clone();
        if !f.is_zero() {
            for (o, r) in out.iter_mut().zip(row) {
                *o -= &f * r;
            }
        }
    }
    out
}

/// Orthogonal projection onto the complement of `span(basis)`.
pub fn project_out(x: &[Rational], basis: &[QVector]) -> QVector {
    if basis.is_empty() {
        return x.to_vec();
    }
    // Gram system G c = B x, then x - Bᵀ c.
    let k = basis.len();
    let gram: Vec<QVector> = (0..k)
        .map(|i| (0..k).map(|j| dot(&basis[i], &basis[j])).collect())
        .collect();
    let rhs: QVector = basis.iter().map(|b| dot(b, x)).collect();
    let c = solve_unique(&gram, &rhs, k).expect("projection basis must be independent");
    let mut out = x.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        for (o, bj) in out.iter_mut().zip(b) {
            *o -= ci * bj;
        }
    }
    out
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}
