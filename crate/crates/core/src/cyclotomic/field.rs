use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith;
use crate::linalg::{max_abs_row_sum, Matrix};

/// The cyclotomic field `K_N = Q(zeta_N)` presented as `Q[x] / Phi_N`.
///
/// Fields are interned: [`CycloField::get`] returns the same `Arc` for a
/// conductor every time, so elements compare their parents by pointer or by
/// conductor interchangeably.
pub struct CycloField {
    conductor: u64,
    degree: usize,
    modulus: Vec<BigInt>,
    powers: Vec<Vec<BigInt>>,
    units: Vec<u64>,
    coordinate_factor: OnceLock<BigRational>,
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K_{}", self.conductor)
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
    }
}

impl Eq for CycloField {}

fn cache() -> &'static Mutex<HashMap<u64, Arc<CycloField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CycloField {
    /// The interned field of conductor `n` (`n >= 1`).
    pub fn get(n: u64) -> Arc<CycloField> {
        assert!(n >= 1, "conductor must be positive");
        if let Some(f) = cache().lock().expect("field cache poisoned").get(&n) {
            return f.clone();
        }
        let built = Arc::new(CycloField::build(n));
        cache()
            .lock()
            .expect("field cache poisoned")
            .entry(n)
            .or_insert(built)
            .clone()
    }

    fn build(n: u64) -> CycloField {
        let modulus = cyclotomic_polynomial(n);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut current = vec![BigInt::zero(); degree];
        current[0] = BigInt::one();
        for _ in 0..n {
            powers.push(current.clone());
            // multiply by x and reduce
            let mut next = vec![BigInt::zero(); degree + 1];
            next[1..].clone_from_slice(&current);
            let top = next[degree].clone();
            if !top.is_zero() {
                for (j, m) in modulus.iter().take(degree).enumerate() {
                    next[j] -= &top * m;
                }
            }
            next.truncate(degree);
            current = next;
        }
        CycloField {
            conductor: n,
            degree,
            modulus,
            powers,
            units: arith::units(n),
            coordinate_factor: OnceLock::new(),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `phi(N)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Phi_N`, ascending, monic.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Units modulo `N` in ascending order; these label `Gal(K_N/Q)`.
    pub fn units(&self) -> &[u64] {
        &self.units
    }

    /// Reduced integer coordinates of `zeta^k`.
    pub(crate) fn zeta_power(&self, k: u64) -> &[BigInt] {
        &self.powers[(k % self.conductor) as usize]
    }

    /// Reduce an integer polynomial in `zeta` modulo `Phi_N`.
    pub(crate) fn reduce(&self, mut poly: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree;
        for i in (d..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let top = std::mem::take(&mut poly[i]);
            for j in 0..d {
                if !self.modulus[j].is_zero() {
                    let t = &top * &self.modulus[j];
                    poly[i - d + j] -= t;
                }
            }
        }
        poly.resize(d, BigInt::zero());
        poly
    }

    /// A constant `c` with `|coordinate_k(a)| <= c * max_sigma |sigma(a)|` for
    /// every `a` in `K_N`, derived from the inverse trace form.
    pub fn coordinate_factor(&self) -> &BigRational {
        self.coordinate_factor.get_or_init(|| {
            let d = self.degree;
            let n = self.conductor;
            // trace of zeta^e over Q is the Ramanujan sum c_N(e)
            let trace = |e: u64| -> BigRational {
                let mut t = BigInt::zero();
                for &u in &self.units {
                    let idx = if n == 1 { 0 } else { (e * u) % n };
                    t += &self.powers[idx as usize][0];
                }
                BigRational::from_integer(t)
            };
            let m = Matrix::from_fn(d, d, |k, i| {
                let e = (i as u64 + n * d as u64 - k as u64) % n.max(1);
                trace(e)
            });
            let inv = m.inverse().expect("trace form is nondegenerate");
            max_abs_row_sum(&inv) * BigRational::from_integer(BigInt::from(d))
        })
    }
}

/// The `n`-th cyclotomic polynomial, ascending integer coefficients.
///
/// Built from the product formula `prod_{d | n} (x^d - 1)^{mu(n/d)}`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in arith::divisors(n) {
        let mu = mobius_mu(n / d);
        if mu == 0 {
            continue;
        }
        let mut factor = vec![BigInt::zero(); d as usize + 1];
        factor[0] = BigInt::from(-1);
        factor[d as usize] = BigInt::one();
        if mu == 1 {
            num = int_poly_mul(&num, &factor);
        } else {
            den = int_poly_mul(&den, &factor);
        }
    }
    int_poly_exact_div(&num, &den)
}

fn mobius_mu(n: u64) -> i32 {
    let f = arith::factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub(crate) fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic divisor (leading coefficient +-1).
fn int_poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}
