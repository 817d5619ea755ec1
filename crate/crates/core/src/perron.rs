//! Exact polynomial arithmetic over the rationals: characteristic
//! polynomials and adjugates (Faddeev–LeVerrier), Sturm sequences and
//! comparison of real roots against rational points.

use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_else(Rational::zero)
                        + o.0.get(i).cloned().unwrap_or_else(Rational::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.0.clone();
        let lead = d.lead();
        let mut quo = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            quo[k] = f;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(quo), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead();
        Poly::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    /// Sign at `+infinity`.
    fn sign_at_infinity(&self) -> i32 {
        sign(&self.lead())
    }

    pub fn display(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }

    /// Human-readable form such as `x^2 - 1/2*x + 3`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

fn sign(x: &Rational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            seq.push(r);
        }
        seq.pop();
        Self { seq }
    }

    fn changes_at(&self, x: &Rational) -> usize {
        sign_changes(self.seq.iter().map(|p| sign(&p.eval(x))))
    }

    fn changes_at_infinity(&self) -> usize {
        sign_changes(self.seq.iter().map(|p| p.sign_at_infinity()))
    }

    /// Distinct real roots in `(a, b]`, for `a` not a root.
    pub fn count_between(&self, a: &Rational, b: &Rational) -> usize {
        self.changes_at(a) - self.changes_at(b)
    }

    /// Distinct real roots in `(a, +infinity)`, for `a` not a root.
    pub fn count_above(&self, a: &Rational) -> usize {
        self.changes_at(a) - self.changes_at_infinity()
    }
}

/// Number of distinct real roots of `p` strictly greater than `a`.
pub fn roots_above(p: &Poly, a: &Rational) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut s = p.squarefree();
    let lin = Poly::new(vec![-a.clone(), Rational::one()]);
    if s.eval(a).is_zero() {
        s = s.div_rem(&lin).0;
    }
    if s.degree().unwrap_or(0) == 0 {
        return 0;
    }
    Sturm::new(&s).count_above(a)
}

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn is_nilpotent(a: &Matrix) -> bool {
    let n = a.len();
    let mut p = a.clone();
    for _ in 1..n.max(1) {
        p = mat_mul(&p, a);
    }
    p.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Characteristic polynomial `det(xI - A)` and matrices `B`
/// with `adj(xI - A) = sum_k B[k] x^k`.
pub fn char_poly_adjugate(a: &Matrix) -> (Poly, Vec<Matrix>) {
    let n = a.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut mk = vec![vec![Rational::zero(); n]; n];
    let mut bs = Vec::with_capacity(n);
    for k in 1..=n {
        let mut next = mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am = mat_mul(a, &next);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / q(k as i64);
        bs.push(next.clone());
        mk = next;
    }
    // M_k is the coefficient of x^(n-k); store by ascending power.
    bs.reverse();
    (Poly::new(c), bs)
}

/// Column `j` of `adj(xI - A)` as polynomials.
pub fn adjugate_column(bs: &[Matrix], j: usize) -> Vec<Poly> {
    let n = bs.first().map_or(0, |m| m.len());
    (0..n)
        .map(|i| Poly::new(bs.iter().map(|m| m[i][j].clone()).collect()))
        .collect()
}

/// Strong connectivity of the support digraph of a square matrix.
pub fn is_irreducible(a: &Matrix) -> bool {
    let n = a.len();
    if n == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let nz = if forward { !a[i][j].is_zero() } else { !a[j][i].is_zero() };
                if nz && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|b| b)
    };
    // A 1x1 zero matrix is not irreducible.
    if n == 1 {
        return !a[0][0].is_zero();
    }
    reach(true) && reach(false)
}

/// An integer root `>= 2` of `p`, if the largest real root is one.
pub fn integer_root_between(p: &Poly, lo: i64, hi: i64) -> Option<i64> {
    (lo..=hi).rev().find(|&k| p.eval(&q(k)).is_zero())
}
