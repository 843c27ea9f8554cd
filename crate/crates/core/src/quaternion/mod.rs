//! The definite quaternion algebra `H(-q,-p)`, Ibukiyama's maximal orders
//! `O(q)` and `O'(q)`, their left ideals of prime norm, and the principality
//! and Frobenius tests that mirror loops and F_p-edges of the isogeny graph.

mod lattice;

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{is_prime, legendre, sqrt_mod_prime};
use crate::error::{arg_err, Error, Result};
use crate::quad_class::solve_norm_eq;

pub use lattice::{Coords, Lattice};

pub type Q = Ratio<i128>;

/// `H(-q,-p)`: `i^2 = -q`, `j^2 = -p`, `k = ij = -ji`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    pub q: i128,
    pub p: i128,
}

impl Algebra {
    pub fn new(q: u64, p: u64) -> Self {
        Algebra {
            q: q as i128,
            p: p as i128,
        }
    }

    pub fn mul(&self, a: &Coords, b: &Coords) -> Coords {
        let (q, p) = (Q::from_integer(self.q), Q::from_integer(self.p));
        let [x1, y1, z1, w1] = *a;
        let [x2, y2, z2, w2] = *b;
        [
            x1 * x2 - q * y1 * y2 - p * z1 * z2 - p * q * w1 * w2,
            x1 * y2 + y1 * x2 + p * (z1 * w2 - w1 * z2),
            x1 * z2 + z1 * x2 - q * (y1 * w2 - w1 * y2),
            x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2,
        ]
    }

    pub fn conj(&self, a: &Coords) -> Coords {
        [a[0], -a[1], -a[2], -a[3]]
    }

    pub fn nrd(&self, a: &Coords) -> Q {
        self.norm_form(a, a)
    }

    pub fn trd(&self, a: &Coords) -> Q {
        a[0] * Q::from_integer(2)
    }

    /// The symmetric bilinear form `Trd(a conj(b)) / 2`.
    pub fn norm_form(&self, a: &Coords, b: &Coords) -> Q {
        let (q, p) = (Q::from_integer(self.q), Q::from_integer(self.p));
        a[0] * b[0] + q * a[1] * b[1] + p * a[2] * b[2] + p * q * a[3] * b[3]
    }
}

/// `x + y i + z j + w k` with exact rational coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuatElement {
    pub alg: Algebra,
    pub c: Coords,
}

impl QuatElement {
    pub fn new(alg: Algebra, c: Coords) -> Self {
        QuatElement { alg, c }
    }

    pub fn from_ints(alg: Algebra, x: i128, y: i128, z: i128, w: i128) -> Self {
        Self::new(alg, [x, y, z, w].map(Q::from_integer))
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.alg != other.alg {
            return arg_err(format!(
                "elements of H(-{},-{}) and H(-{},-{}) cannot be combined",
                self.alg.q, self.alg.p, other.alg.q, other.alg.p
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(Self::new(self.alg, self.alg.mul(&self.c, &other.c)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(Self::new(self.alg, std::array::from_fn(|t| self.c[t] + other.c[t])))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        Ok(Self::new(self.alg, std::array::from_fn(|t| self.c[t] - other.c[t])))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.alg, self.alg.conj(&self.c))
    }

    pub fn nrd(&self) -> Q {
        self.alg.nrd(&self.c)
    }

    pub fn trd(&self) -> Q {
        self.alg.trd(&self.c)
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z, w] = self.c;
        write!(f, "{x} + {y}i + {z}j + {w}k")
    }
}

/// Which of Ibukiyama's two families an order belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OrderKind {
    #[serde(rename = "O")]
    O,
    #[serde(rename = "O'")]
    OPrime,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::O => "O",
            OrderKind::OPrime => "O'",
        })
    }
}

impl std::str::FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(OrderKind::O),
            "O'" | "Oprime" | "O_prime" => Ok(OrderKind::OPrime),
            _ => arg_err(format!("unknown order kind `{s}`")),
        }
    }
}

/// `q` prime, `q = 3 mod 8` and `(p/q) = -1`.
pub fn q_condition(q: u64, p: u64) -> bool {
    q % 8 == 3 && is_prime(q) && legendre(p as i64, q).is_ok_and(|s| s == -1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatOrder {
    pub kind: OrderKind,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub lattice: Lattice,
}

fn check_order_args(kind: OrderKind, q: u64, p: u64) -> Result<()> {
    if p <= 3 || !is_prime(p) {
        return arg_err(format!("{p} is not a prime greater than 3"));
    }
    match kind {
        OrderKind::O if !q_condition(q, p) => {
            arg_err(format!("O({q}) needs q prime, q = 3 mod 8 and (p/q) = -1 for p = {p}"))
        }
        OrderKind::OPrime if p % 4 != 3 => arg_err(format!("O'(q) needs p = 3 mod 4, got {p}")),
        OrderKind::OPrime if q != 1 && !q_condition(q, p) => arg_err(format!(
            "O'({q}) needs q = 1 or q prime, q = 3 mod 8 and (p/q) = -1 for p = {p}"
        )),
        _ => Ok(()),
    }
}

/// `O(q) = Z<1, (1+i)/2, (j-k)/2, (ri-k)/q>` with `r^2 = -p mod q`, or
/// `O'(q) = Z<1, (1+j)/2, i, (r'i-k)/(2q)>` with `r'^2 = -p mod 4q`; `r` is
/// the least nonnegative choice.
pub fn make_order(kind: OrderKind, q: u64, p: u64) -> Result<QuatOrder> {
    check_order_args(kind, q, p)?;
    let alg = Algebra::new(q, p);
    let h = Ratio::new(1, 2);
    let zero = Q::zero();
    let one = Q::one();
    let (r, basis): (u64, Vec<Coords>) = match kind {
        OrderKind::O => {
            let minus_p = (q - p % q) % q;
            let r = sqrt_mod_prime(minus_p as i64, q)?
                .ok_or_else(|| Error::Internal(format!("-{p} has no square root mod {q}")))?;
            let qq = Ratio::new(1, q as i128);
            (
                r,
                vec![
                    [one, zero, zero, zero],
                    [h, h, zero, zero],
                    [zero, zero, h, -h],
                    [zero, qq * Q::from_integer(r as i128), zero, -qq],
                ],
            )
        }
        OrderKind::OPrime => {
            let m = 4 * q;
            let r = (0..m)
                .find(|&r| (r * r + p) % m == 0)
                .ok_or_else(|| Error::Internal(format!("-{p} has no square root mod {m}")))?;
            let qq = Ratio::new(1, m as i128 / 2);
            (
                r,
                vec![
                    [one, zero, zero, zero],
                    [h, zero, h, zero],
                    [zero, one, zero, zero],
                    [zero, qq * Q::from_integer(r as i128), zero, -qq],
                ],
            )
        }
    };
    let lattice = Lattice::from_generators(alg, &basis)
        .ok_or_else(|| Error::Internal("order basis is degenerate".into()))?;
    if !lattice.is_order() {
        return Err(Error::Internal(format!("{kind}({q}) over p = {p} is not closed")));
    }
    if lattice.reduced_discriminant() != Some(Q::from_integer(p as i128)) {
        return Err(Error::Internal(format!("{kind}({q}) over p = {p} is not maximal")));
    }
    Ok(QuatOrder {
        kind,
        p,
        q,
        r,
        lattice,
    })
}

impl QuatOrder {
    pub fn algebra(&self) -> Algebra {
        self.lattice.alg
    }

    pub fn basis(&self) -> Vec<QuatElement> {
        let alg = self.algebra();
        self.lattice.basis().iter().map(|c| QuatElement::new(alg, *c)).collect()
    }

    pub fn reduced_discriminant(&self) -> Q {
        reduced_discriminant(&self.lattice)
    }
}

/// `sqrt |det(Trd(e_a conj(e_b)))|` over a basis of the lattice.
pub fn reduced_discriminant(l: &Lattice) -> Q {
    l.reduced_discriminant()
        .expect("discriminant of an order is a square")
}

/// Where a left ideal of norm `l` sends the isotropic line `(1 : a)` or
/// `(0 : 1)` under the splitting map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdealLabel {
    Finite(u64),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftIdeal {
    pub order: QuatOrder,
    pub lattice: Lattice,
    pub reduced_norm: u64,
    pub label: IdealLabel,
}

/// A splitting `O / lO -> M_2(F_l)` given by images of `i` and `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theta {
    pub ell: u64,
    pub i: [[u64; 2]; 2],
    pub j: [[u64; 2]; 2],
}

type Mat2 = [[u64; 2]; 2];

fn mat_mul(a: &Mat2, b: &Mat2, l: u64) -> Mat2 {
    std::array::from_fn(|r| std::array::from_fn(|c| (a[r][0] * b[0][c] + a[r][1] * b[1][c]) % l))
}

impl Theta {
    /// `theta(i) = [[0, -q], [1, 0]]`, `theta(j) = [[u, qv], [v, -u]]` with
    /// `u^2 + q v^2 = -p` in F_l.
    pub fn new(q: u64, p: u64, ell: u64) -> Result<Self> {
        let l = ell;
        let (qm, pm) = (q % l, p % l);
        let target = (l - pm) % l;
        for v in 0..l {
            let rest = (target + l * l - qm * v % l * v % l) % l;
            if let Some(u) = sqrt_mod_prime(rest as i64, l)? {
                return Ok(Theta {
                    ell,
                    i: [[0, (l - qm) % l], [1, 0]],
                    j: [[u, qm * v % l], [v, (l - u) % l]],
                });
            }
        }
        Err(Error::Internal(format!("u^2 + {q}v^2 = -{p} unsolvable mod {l}")))
    }

    fn reduce(&self, x: &Q) -> u64 {
        let l = self.ell as i128;
        let n = x.numer().rem_euclid(l);
        let d = x.denom().rem_euclid(l);
        let dinv = crate::arith::mod_pow(d as u64, self.ell - 2, self.ell) as i128;
        (n * dinv % l) as u64
    }

    pub fn k(&self) -> Mat2 {
        mat_mul(&self.i, &self.j, self.ell)
    }

    /// Image of an element whose coordinates are `l`-integral.
    pub fn map(&self, c: &Coords) -> Mat2 {
        let l = self.ell;
        let k = self.k();
        let s = c.map(|x| self.reduce(&x));
        std::array::from_fn(|r| {
            std::array::from_fn(|col| {
                let id = u64::from(r == col);
                (s[0] * id + s[1] * self.i[r][col] + s[2] * self.j[r][col] + s[3] * k[r][col]) % l
            })
        })
    }
}

/// The `l + 1` left ideals of reduced norm `l`, as the preimages of the
/// annihilators of the lines in F_l^2.
pub fn left_ideals_norm_ell(order: &QuatOrder, ell: u64) -> Result<Vec<LeftIdeal>> {
    if !is_prime(ell) {
        return arg_err(format!("{ell} is not prime"));
    }
    if ell == 2 || order.p % ell == 0 || order.q % ell == 0 {
        return arg_err(format!("l = {ell} divides 2pq"));
    }
    let theta = Theta::new(order.q, order.p, ell)?;
    let l = ell;
    let basis = order.lattice.basis();
    let images: Vec<Mat2> = basis.iter().map(|b| theta.map(b)).collect();
    let mut lines: Vec<(IdealLabel, [u64; 2])> = (0..l).map(|a| (IdealLabel::Finite(a), [1, a])).collect();
    lines.push((IdealLabel::Infinity, [0, 1]));
    let alg = order.algebra();
    lines
        .into_iter()
        .map(|(label, w)| {
            // Columns: theta(e_a) w for each basis element.
            let cols: Vec<[u64; 2]> = images
                .iter()
                .map(|m| [(m[0][0] * w[0] + m[0][1] * w[1]) % l, (m[1][0] * w[0] + m[1][1] * w[1]) % l])
                .collect();
            let kernel = kernel_mod(&cols, l);
            let mut gens: Vec<Coords> = basis
                .iter()
                .map(|b| b.map(|x| x * Q::from_integer(l as i128)))
                .collect();
            for kv in kernel {
                gens.push(std::array::from_fn(|t| {
                    (0..4).fold(Q::zero(), |s, a| s + basis[a][t] * Q::from_integer(kv[a] as i128))
                }));
            }
            let lattice = Lattice::from_generators(alg, &gens)
                .ok_or_else(|| Error::Internal("ideal lattice is degenerate".into()))?;
            Ok(LeftIdeal {
                order: order.clone(),
                lattice,
                reduced_norm: ell,
                label,
            })
        })
        .collect()
}

/// Basis of `{c in F_l^4 : sum_a c_a cols[a] = 0}`.
fn kernel_mod(cols: &[[u64; 2]], l: u64) -> Vec<[u64; 4]> {
    let inv = |a: u64| crate::arith::mod_pow(a, l - 2, l);
    // Row-reduce the 2 x 4 system.
    let mut m: [[u64; 4]; 2] = std::array::from_fn(|r| std::array::from_fn(|a| cols[a][r]));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..4 {
        if row == 2 {
            break;
        }
        let Some(pr) = (row..2).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, pr);
        let s = inv(m[row][col]);
        m[row].iter_mut().for_each(|x| *x = *x * s % l);
        for r in 0..2 {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for t in 0..4 {
                    m[r][t] = (m[r][t] + l * l - f * m[row][t] % l) % l;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..4)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [0u64; 4];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (l - m[r][free]) % l;
            }
            v
        })
        .collect()
}

impl LeftIdeal {
    pub fn algebra(&self) -> Algebra {
        self.order.algebra()
    }

    fn norm_q(&self) -> Q {
        Q::from_integer(self.reduced_norm as i128)
    }

    /// `I conj(I)`, which equals `Nrd(I) O_L(I)`.
    pub fn times_conjugate(&self) -> Lattice {
        self.lattice.product(&self.lattice.conjugate())
    }

    pub fn left_order(&self) -> Lattice {
        self.times_conjugate().scale(self.norm_q().recip())
    }

    /// `O_R(I) = conj(I) I / Nrd(I)`.
    pub fn right_order(&self) -> Lattice {
        self.lattice
            .conjugate()
            .product(&self.lattice)
            .scale(self.norm_q().recip())
    }

    /// `sqrt [O : I]`.
    pub fn norm_from_index(&self) -> Q {
        let idx = self.order.lattice.index_of(&self.lattice);
        let n = crate::arith::integer_sqrt(idx.to_integer() as u128) as i128;
        Q::from_integer(n)
    }
}

/// Canonical representative of `{v, -v}`: first nonzero coordinate positive.
fn canonical_sign(v: Coords) -> Coords {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.map(|t| -t),
        _ => v,
    }
}

/// A generator of `I` when `I = O alpha`, i.e. an element of norm `Nrd(I)`.
pub fn is_principal_ideal(ideal: &LeftIdeal) -> Option<QuatElement> {
    let mut found: Vec<Coords> = ideal
        .lattice
        .vectors_of_norm(ideal.norm_q())
        .into_iter()
        .map(canonical_sign)
        .collect();
    found.sort();
    found.first().map(|c| QuatElement::new(ideal.algebra(), *c))
}

/// Whether the right order of `I` has an element `mu` with `Trd = 0` and
/// `Nrd = p`, i.e. a Frobenius.
pub fn frobenius_in_right_order(ideal: &LeftIdeal) -> bool {
    frobenius_in(&ideal.right_order(), ideal.order.p)
}

pub fn frobenius_in(order: &Lattice, p: u64) -> bool {
    !order.pure_vectors_of_norm(Q::from_integer(p as i128)).is_empty()
}

/// Isomorphism test between two orders of the same kind over the same `p`.
pub fn orders_isomorphic(kind: OrderKind, q1: u64, q2: u64, p: u64) -> Result<bool> {
    check_order_args(kind, q1, p)?;
    check_order_args(kind, q2, p)?;
    if q1 == q2 {
        return Ok(true);
    }
    Ok(match kind {
        OrderKind::O => !solve_norm_eq(4 * p, q1 * q2).is_empty(),
        OrderKind::OPrime => !solve_norm_eq(p, 4 * q1 * q2).is_empty(),
    })
}

/// Counts over the `l + 1` ideals of norm `l`: principal ones, and
/// non-principal ones whose right order contains a Frobenius.
pub fn deuring_counts(order: &QuatOrder, ell: u64) -> Result<(usize, usize)> {
    let ideals = left_ideals_norm_ell(order, ell)?;
    let mut principal = 0;
    let mut frob = 0;
    for i in &ideals {
        if is_principal_ideal(i).is_some() {
            principal += 1;
        } else if frobenius_in_right_order(i) {
            frob += 1;
        }
    }
    Ok((principal, frob))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qi(n: i128) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn defining_relations() {
        let alg = Algebra::new(11, 101);
        let i = QuatElement::from_ints(alg, 0, 1, 0, 0);
        let j = QuatElement::from_ints(alg, 0, 0, 1, 0);
        let k = QuatElement::from_ints(alg, 0, 0, 0, 1);
        assert_eq!(i.mul(&j).unwrap(), k);
        assert_eq!(j.mul(&i).unwrap(), QuatElement::from_ints(alg, 0, 0, 0, -1));
        assert_eq!(i.mul(&i).unwrap(), QuatElement::from_ints(alg, -11, 0, 0, 0));
        assert_eq!(j.mul(&j).unwrap(), QuatElement::from_ints(alg, -101, 0, 0, 0));
        assert_eq!(k.mul(&k).unwrap(), QuatElement::from_ints(alg, -1111, 0, 0, 0));
        assert_eq!(i.nrd(), qi(11));
        assert_eq!(j.nrd(), qi(101));
        assert!(i.trd().is_zero());
        let other = QuatElement::from_ints(Algebra::new(3, 101), 1, 0, 0, 0);
        assert!(i.mul(&other).is_err());
    }

    #[test]
    fn norm_is_multiplicative_and_conjugation_involutive() {
        let alg = Algebra::new(19, 311);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rand_elem = |rng: &mut ChaCha8Rng| {
            QuatElement::new(
                alg,
                std::array::from_fn(|_| Ratio::new(rng.gen_range(-50..50), rng.gen_range(1..9))),
            )
        };
        for _ in 0..200 {
            let a = rand_elem(&mut rng);
            let b = rand_elem(&mut rng);
            assert_eq!(a.mul(&b).unwrap().nrd(), a.nrd() * b.nrd());
            assert_eq!(a.conj().conj(), a);
            let sum = a.add(&a.conj()).unwrap();
            assert_eq!(sum.c, [a.trd(), qi(0), qi(0), qi(0)]);
            assert_eq!(a.mul(&a.conj()).unwrap().c[0], a.nrd());
            assert_eq!(a.mul(&b).unwrap().conj(), b.conj().mul(&a.conj()).unwrap());
        }
    }

    #[test]
    fn orders_are_maximal() {
        let o = make_order(OrderKind::O, 11, 101).unwrap();
        assert_eq!(o.r, 3);
        assert_eq!(o.reduced_discriminant(), qi(101));
        let o = make_order(OrderKind::OPrime, 3, 311).unwrap();
        assert_eq!(o.reduced_discriminant(), qi(311));
        assert!(make_order(OrderKind::OPrime, 1, 311).is_ok());
        assert!(make_order(OrderKind::O, 7, 101).is_err());
        assert!(make_order(OrderKind::OPrime, 3, 101).is_err());

        let alg = Algebra::new(11, 101);
        let std_basis: Vec<Coords> = (0..4)
            .map(|t| std::array::from_fn(|s| qi((s == t) as i128)))
            .collect();
        let z = Lattice::from_generators(alg, &std_basis).unwrap();
        assert_eq!(reduced_discriminant(&z), qi(4 * 11 * 101));

        for p in crate::arith::primes_up_to(400).into_iter().filter(|&p| p > 3) {
            for q in (3..200).filter(|&q| q_condition(q, p)) {
                assert_eq!(make_order(OrderKind::O, q, p).unwrap().reduced_discriminant(), qi(p as i128));
                if p % 4 == 3 {
                    make_order(OrderKind::OPrime, q, p).unwrap();
                }
            }
        }
    }

    #[test]
    fn theta_is_a_splitting() {
        let t = Theta::new(11, 101, 7).unwrap();
        let l = 7;
        let neg = |x: u64| (l - x % l) % l;
        assert_eq!(mat_mul(&t.i, &t.i, l), [[neg(11), 0], [0, neg(11)]]);
        assert_eq!(mat_mul(&t.j, &t.j, l), [[neg(101), 0], [0, neg(101)]]);
        let ij = mat_mul(&t.i, &t.j, l);
        let ji = mat_mul(&t.j, &t.i, l);
        assert_eq!(ij, ji.map(|r| r.map(neg)));
        // Multiplicative on order elements.
        let o = make_order(OrderKind::O, 11, 101).unwrap();
        let b = o.lattice.basis();
        for x in &b {
            for y in &b {
                assert_eq!(t.map(&o.algebra().mul(x, y)), mat_mul(&t.map(x), &t.map(y), l));
            }
        }
    }

    #[test]
    fn ideal_invariants() {
        for (kind, q, p, ell) in [
            (OrderKind::O, 11, 101, 3),
            (OrderKind::O, 3, 101, 5),
            (OrderKind::OPrime, 3, 311, 5),
            (OrderKind::OPrime, 1, 311, 3),
        ] {
            let o = make_order(kind, q, p).unwrap();
            let ideals = left_ideals_norm_ell(&o, ell).unwrap();
            assert_eq!(ideals.len() as u64, ell + 1);
            let distinct: std::collections::HashSet<_> = ideals.iter().map(|i| i.lattice.clone()).collect();
            assert_eq!(distinct.len(), ideals.len());
            for i in &ideals {
                assert_eq!(i.norm_from_index(), qi(ell as i128));
                assert!(o.lattice.contains_lattice(&i.lattice));
                assert!(i.lattice.contains_lattice(&o.lattice.product(&i.lattice)));
                assert_eq!(i.times_conjugate(), o.lattice.scale(qi(ell as i128)));
                assert_eq!(i.left_order(), o.lattice);
                let right = i.right_order();
                assert!(right.is_order());
                assert_eq!(reduced_discriminant(&right), qi(p as i128));
                assert!(right.contains_lattice(&i.lattice.conjugate().product(&i.lattice).scale(qi(ell as i128).recip())));
            }
        }
        assert!(left_ideals_norm_ell(&make_order(OrderKind::O, 11, 101).unwrap(), 11).is_err());
    }

    /// Every vector of `I` with norm exactly `n`, by scanning the box that
    /// bounds the norm-`n` ellipsoid.
    fn brute_norm_vectors(l: &Lattice, n: Q) -> Vec<Coords> {
        let g = l.gram();
        let det = lattice::determinant(g);
        let basis = l.basis();
        let mut bounds = [0i128; 4];
        for (t, b) in bounds.iter_mut().enumerate() {
            // (G^-1)_tt = cofactor / det.
            let mut minor = g;
            for s in 0..4 {
                minor[t][s] = qi((s == t) as i128);
                minor[s][t] = qi((s == t) as i128);
            }
            let inv_tt = lattice::determinant(minor) / det;
            let r2 = (n * inv_tt).to_integer() + 1;
            *b = crate::arith::integer_sqrt(r2 as u128) as i128 + 1;
        }
        let mut out = Vec::new();
        for a in -bounds[0]..=bounds[0] {
            for b in -bounds[1]..=bounds[1] {
                for c in -bounds[2]..=bounds[2] {
                    for d in -bounds[3]..=bounds[3] {
                        let co = [a, b, c, d];
                        let v: Coords = std::array::from_fn(|t| {
                            (0..4).fold(qi(0), |s, r| s + basis[r][t] * qi(co[r]))
                        });
                        if l.alg.nrd(&v) == n {
                            out.push(v);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn principality_matches_brute_force() {
        for (kind, q, p, ell) in [(OrderKind::O, 11, 101, 3), (OrderKind::OPrime, 3, 311, 5), (OrderKind::O, 3, 83, 5)] {
            let o = make_order(kind, q, p).unwrap();
            for i in left_ideals_norm_ell(&o, ell).unwrap() {
                let mut fast = i.lattice.vectors_of_norm(qi(ell as i128));
                fast.sort();
                assert_eq!(fast, brute_norm_vectors(&i.lattice, qi(ell as i128)));
                assert_eq!(is_principal_ideal(&i).is_some(), !fast.is_empty());
            }
        }
    }

    #[test]
    fn unit_ideal_and_frobenius() {
        let o = make_order(OrderKind::O, 11, 101).unwrap();
        let unit = LeftIdeal {
            order: o.clone(),
            lattice: o.lattice.clone(),
            reduced_norm: 1,
            label: IdealLabel::Finite(0),
        };
        let g = is_principal_ideal(&unit).unwrap();
        assert_eq!(g, QuatElement::from_ints(o.algebra(), 1, 0, 0, 0));
        assert!(frobenius_in_right_order(&unit));
    }

    #[test]
    fn counts_for_worked_orders() {
        let o = make_order(OrderKind::O, 11, 101).unwrap();
        let ideals = left_ideals_norm_ell(&o, 3).unwrap();
        assert_eq!(ideals.iter().filter(|i| is_principal_ideal(i).is_some()).count(), 2);
        assert_eq!(deuring_counts(&o, 3).unwrap(), (2, 2));

        let o = make_order(OrderKind::OPrime, 3, 311).unwrap();
        assert_eq!(deuring_counts(&o, 5).unwrap().0, 0);

        // Outside the hypothesis an F_p vertex can be reached twice: the
        // four ideals here match edges to 319, 437 (twice) and 1336.
        let o = make_order(OrderKind::O, 11, 1847).unwrap();
        assert_eq!(deuring_counts(&o, 13).unwrap(), (0, 4));
    }

    #[test]
    fn isomorphism_tests() {
        assert!(orders_isomorphic(OrderKind::O, 11, 11, 101).unwrap());
        assert!(!orders_isomorphic(OrderKind::O, 11, 3, 101).unwrap());
        assert!(!orders_isomorphic(OrderKind::OPrime, 67, 419, 311).unwrap());
        assert!(orders_isomorphic(OrderKind::OPrime, 107, 419, 311).unwrap());
        assert!(orders_isomorphic(OrderKind::O, 7, 3, 101).is_err());
    }
}
