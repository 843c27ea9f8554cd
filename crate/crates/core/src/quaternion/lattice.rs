//! Full-rank lattices in `H(-q,-p)` stored as a Hermite normal form over a
//! common denominator, plus exact short-vector enumeration for the reduced
//! norm form.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Algebra, Q};

pub type Coords = [Q; 4];

/// `den^-1 * rows`, with `rows` upper triangular, positive diagonal and
/// entries above the diagonal reduced modulo it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub(crate) alg: Algebra,
    den: i128,
    rows: [[i128; 4]; 4],
}

fn hnf(gens: Vec<[i128; 4]>) -> Option<[[i128; 4]; 4]> {
    // Insert generators one at a time into a triangular basis indexed by
    // pivot column, reducing after each insertion to keep entries small.
    let mut basis: [Option<[i128; 4]>; 4] = [None; 4];
    for mut v in gens {
        for col in 0..4 {
            if v[col] == 0 {
                continue;
            }
            let Some(pv) = basis[col] else {
                if v[col] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                basis[col] = Some(v);
                break;
            };
            let e = pv[col].extended_gcd(&v[col]);
            let (a, b) = (pv[col] / e.gcd, v[col] / e.gcd);
            let mut np = [0i128; 4];
            let mut nv = [0i128; 4];
            for t in 0..4 {
                np[t] = e.x * pv[t] + e.y * v[t];
                nv[t] = a * v[t] - b * pv[t];
            }
            if np[col] < 0 {
                np.iter_mut().for_each(|x| *x = -*x);
            }
            basis[col] = Some(np);
            v = nv;
        }
        reduce_above(&mut basis);
    }
    let mut out = [[0i128; 4]; 4];
    for (col, row) in basis.into_iter().enumerate() {
        out[col] = row?;
    }
    Some(out)
}

fn reduce_above(basis: &mut [Option<[i128; 4]>; 4]) {
    for col in 0..4 {
        let Some(pv) = basis[col] else { continue };
        let d = pv[col];
        for r in 0..col {
            if let Some(row) = basis[r].as_mut() {
                let f = Integer::div_floor(&row[col], &d);
                if f != 0 {
                    for t in 0..4 {
                        row[t] -= f * pv[t];
                    }
                }
            }
        }
    }
}

impl Lattice {
    /// The lattice spanned by `gens`; `None` if they do not have rank 4.
    pub fn from_generators(alg: Algebra, gens: &[Coords]) -> Option<Self> {
        let den = gens
            .iter()
            .flatten()
            .fold(1i128, |acc, c| acc.lcm(c.denom()));
        let ints: Vec<[i128; 4]> = gens
            .iter()
            .map(|g| std::array::from_fn(|t| (g[t] * den).to_integer()))
            .filter(|g: &[i128; 4]| g.iter().any(|&v| v != 0))
            .collect();
        let rows = hnf(ints)?;
        let mut l = Lattice { alg, den, rows };
        l.normalize();
        Some(l)
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    fn normalize(&mut self) {
        let g = self
            .rows
            .iter()
            .flatten()
            .fold(self.den, |acc, &v| acc.gcd(&v));
        if g > 1 {
            self.den /= g;
            self.rows.iter_mut().flatten().for_each(|v| *v /= g);
        }
    }

    pub fn basis(&self) -> [Coords; 4] {
        std::array::from_fn(|r| std::array::from_fn(|t| Ratio::new(self.rows[r][t], self.den)))
    }

    /// Integer coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &Coords) -> Option<[i128; 4]> {
        let mut rem: [Q; 4] = std::array::from_fn(|t| v[t] * self.den);
        let mut c = [0i128; 4];
        for col in 0..4 {
            let x = rem[col] / Q::from_integer(self.rows[col][col]);
            if !x.is_integer() {
                return None;
            }
            c[col] = x.to_integer();
            for t in col..4 {
                rem[t] -= Q::from_integer(c[col] * self.rows[col][t]);
            }
        }
        rem.iter().all(Zero::is_zero).then_some(c)
    }

    pub fn contains(&self, v: &Coords) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    /// Volume of a fundamental domain in `(1, i, j, k)` coordinates.
    pub fn covolume(&self) -> Q {
        let prod = self.rows.iter().enumerate().fold(1i128, |a, (r, row)| a * row[r]);
        Ratio::new(prod, self.den.pow(4))
    }

    /// `[self : sub]` for a sublattice `sub`.
    pub fn index_of(&self, sub: &Lattice) -> Q {
        sub.covolume() / self.covolume()
    }

    /// The lattice spanned by all products `a * b`.
    pub fn product(&self, other: &Lattice) -> Lattice {
        let mut gens = Vec::with_capacity(16);
        for a in self.basis() {
            for b in other.basis() {
                gens.push(self.alg.mul(&a, &b));
            }
        }
        Lattice::from_generators(self.alg, &gens).expect("product of full lattices is full")
    }

    pub fn conjugate(&self) -> Lattice {
        let gens: Vec<Coords> = self.basis().iter().map(|b| self.alg.conj(b)).collect();
        Lattice::from_generators(self.alg, &gens).unwrap()
    }

    pub fn scale(&self, s: Q) -> Lattice {
        let gens: Vec<Coords> = self
            .basis()
            .iter()
            .map(|b| std::array::from_fn(|t| b[t] * s))
            .collect();
        Lattice::from_generators(self.alg, &gens).unwrap()
    }

    /// Gram matrix of the bilinear form with `<x, x> = Nrd(x)`.
    pub fn gram(&self) -> [[Q; 4]; 4] {
        let b = self.basis();
        std::array::from_fn(|r| std::array::from_fn(|s| self.alg.norm_form(&b[r], &b[s])))
    }

    /// Whether the lattice contains 1 and is closed under multiplication.
    pub fn is_order(&self) -> bool {
        let one = [Q::one(), Q::zero(), Q::zero(), Q::zero()];
        if !self.contains(&one) {
            return false;
        }
        let b = self.basis();
        b.iter()
            .all(|x| b.iter().all(|y| self.contains(&self.alg.mul(x, y))))
    }

    /// `sqrt |det(Trd(e_a conj(e_b)))|`, or `None` if not a perfect square.
    pub fn reduced_discriminant(&self) -> Option<Q> {
        let g = self.gram();
        let two = Q::from_integer(2);
        let trd: [[Q; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|s| g[r][s] * two));
        rational_sqrt(determinant(trd).abs())
    }

    /// Every lattice vector with `Nrd <= bound`, as coordinates in `(1,i,j,k)`.
    pub fn vectors_up_to(&self, bound: Q) -> Vec<Coords> {
        self.enumerate(&self.basis(), bound)
    }

    /// Lattice vectors of reduced norm exactly `n`.
    pub fn vectors_of_norm(&self, n: Q) -> Vec<Coords> {
        self.vectors_up_to(n)
            .into_iter()
            .filter(|v| self.alg.nrd(v) == n)
            .collect()
    }

    /// Trace-zero lattice vectors of reduced norm exactly `n`. In Hermite
    /// form only the first row has a real part, so the trace-zero sublattice
    /// is spanned by the other three.
    pub fn pure_vectors_of_norm(&self, n: Q) -> Vec<Coords> {
        let b = self.basis();
        self.enumerate(&b[1..], n)
            .into_iter()
            .filter(|v| self.alg.nrd(v) == n)
            .collect()
    }

    fn enumerate(&self, basis: &[Coords], bound: Q) -> Vec<Coords> {
        let gram: Vec<Vec<Q>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| self.alg.norm_form(x, y)).collect())
            .collect();
        fincke_pohst(&gram, bound)
            .into_iter()
            .map(|c| {
                std::array::from_fn(|t| {
                    (0..basis.len()).fold(Q::zero(), |s, r| s + basis[r][t] * Q::from_integer(c[r]))
                })
            })
            .collect()
    }
}

fn rational_sqrt(x: Q) -> Option<Q> {
    let n = crate::arith::integer_sqrt(x.numer().to_u128()?) as i128;
    let d = crate::arith::integer_sqrt(x.denom().to_u128()?) as i128;
    (n * n == *x.numer() && d * d == *x.denom()).then(|| Ratio::new(n, d))
}

pub(crate) fn determinant(mut m: [[Q; 4]; 4]) -> Q {
    let mut det = Q::one();
    for col in 0..4 {
        let Some(piv) = (col..4).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..4 {
            let f = m[r][col] / m[col][col];
            for t in col..4 {
                let v = m[col][t];
                m[r][t] -= f * v;
            }
        }
    }
    det
}

/// Integer vectors `c` with `c^T G c <= bound` for positive definite `G`.
///
/// The quadratic completion `sum_i d_i (c_i + sum_{j>i} mu_ij c_j)^2` is
/// computed exactly, the search runs in floating point with a safety margin,
/// and every candidate is confirmed with exact integer arithmetic.
pub(crate) fn fincke_pohst(g: &[Vec<Q>], bound: Q) -> Vec<Vec<i128>> {
    let n = g.len();
    let mut qm: Vec<Vec<Q>> = g.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            let t = qm[i][j];
            qm[j][i] = t;
            qm[i][j] = t / qm[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = qm[k][i] * qm[i][l];
                qm[k][l] -= v;
            }
        }
    }
    let qf: Vec<Vec<f64>> = qm
        .iter()
        .map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect())
        .collect();
    let den = g.iter().flatten().fold(*bound.denom(), |a, x| a.lcm(x.denom()));
    let gi: Vec<Vec<i128>> = g
        .iter()
        .map(|r| r.iter().map(|x| (x * den).to_integer()).collect())
        .collect();
    let limit = (bound * den).to_integer();
    let mut search = Search {
        qf: &qf,
        c: vec![0; n],
        out: Vec::new(),
    };
    let b = bound.to_f64().unwrap();
    search.descend(n - 1, b + 1e-6 * (1.0 + b));
    search
        .out
        .into_iter()
        .filter(|c| {
            let mut s = 0i128;
            for r in 0..n {
                for t in 0..n {
                    s += gi[r][t] * c[r] * c[t];
                }
            }
            s <= limit
        })
        .collect()
}

struct Search<'a> {
    qf: &'a [Vec<f64>],
    c: Vec<i128>,
    out: Vec<Vec<i128>>,
}

impl Search<'_> {
    fn descend(&mut self, i: usize, remaining: f64) {
        let n = self.c.len();
        let u: f64 = (i + 1..n).map(|j| self.qf[i][j] * self.c[j] as f64).sum();
        let d = self.qf[i][i];
        let radius = (remaining.max(0.0) / d).sqrt();
        let lo = (-u - radius).floor() as i128 - 1;
        let hi = (-u + radius).ceil() as i128 + 1;
        let slack = 1e-6 * (1.0 + remaining.abs());
        for ci in lo..=hi {
            let t = ci as f64 + u;
            let used = d * t * t;
            if used > remaining + slack {
                continue;
            }
            self.c[i] = ci;
            if i == 0 {
                self.out.push(self.c.clone());
            } else {
                self.descend(i - 1, remaining - used + slack);
            }
        }
        self.c[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn hnf_is_canonical() {
        let alg = Algebra::new(3, 7);
        let a = Lattice::from_generators(
            alg,
            &[
                [q(2), q(0), q(0), q(0)],
                [q(0), q(3), q(0), q(0)],
                [q(1), q(1), q(1), q(0)],
                [q(0), q(0), q(0), q(5)],
            ],
        )
        .unwrap();
        let b = Lattice::from_generators(
            alg,
            &[
                [q(1), q(1), q(1), q(0)],
                [q(3), q(4), q(1), q(0)],
                [q(2), q(0), q(0), q(0)],
                [q(0), q(0), q(0), q(-5)],
                [q(0), q(6), q(0), q(10)],
            ],
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&[q(4), q(6), q(0), q(0)]));
        assert!(!a.contains(&[q(1), q(0), q(0), q(0)]));
    }

    #[test]
    fn enumeration_matches_box_search() {
        let g: Vec<Vec<Q>> = vec![
            vec![q(3), q(1), q(0), q(0)],
            vec![q(1), q(4), Ratio::new(1, 2), q(0)],
            vec![q(0), Ratio::new(1, 2), q(5), q(1)],
            vec![q(0), q(0), q(1), q(7)],
        ];
        let bound = q(30);
        let mut fp = fincke_pohst(&g, bound);
        fp.sort();
        let mut brute = Vec::new();
        for a in -6..=6i128 {
            for b in -6..=6i128 {
                for c in -6..=6i128 {
                    for d in -6..=6i128 {
                        let v = vec![a, b, c, d];
                        let mut s = Q::zero();
                        for r in 0..4 {
                            for t in 0..4 {
                                s += g[r][t] * q(v[r] * v[t]);
                            }
                        }
                        if s <= bound {
                            brute.push(v);
                        }
                    }
                }
            }
        }
        brute.sort();
        assert_eq!(fp, brute);
    }
}
