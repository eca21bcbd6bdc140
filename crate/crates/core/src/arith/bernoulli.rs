use num_integer::binomial;
use num_traits::Zero;

use super::integer::{Integer, Rational};
use crate::error::{Error, Result};

pub const MAX_BERNOULLI_INDEX: u32 = 32;

/// Bernoulli number `B_n` for even `n <= 32`, from
/// `sum_{j <= n} C(n+1, j) B_j = 0` with `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Result<Rational> {
    if n > MAX_BERNOULLI_INDEX || n % 2 == 1 {
        return Err(Error::Invalid(format!("bernoulli index {n} must be even and at most 32")));
    }
    Ok(bernoulli_table(n).pop().unwrap())
}

fn bernoulli_table(n: u32) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::from_integer(1.into()));
            continue;
        }
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from_integer(binomial(Integer::from(m + 1), Integer::from(j))) * bj;
        }
        b.push(-s / Rational::from_integer(Integer::from(m + 1)));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::integer::{rat, rat_int};

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0).unwrap(), rat_int(1));
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(-bernoulli(2).unwrap() / rat_int(2), rat(-1, 12));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(34).is_err());
    }

    #[test]
    fn odd_indices_vanish_in_recurrence() {
        let t = bernoulli_table(31);
        assert_eq!(t[1], rat(-1, 2));
        for n in (3..=31).step_by(2) {
            assert!(t[n].is_zero(), "B_{n}");
        }
    }

    #[test]
    fn recurrence_holds() {
        let t = bernoulli_table(32);
        for n in 1..=32u32 {
            let s: Rational = (0..=n as usize)
                .map(|j| Rational::from_integer(binomial(Integer::from(n + 1), Integer::from(j))) * &t[j])
                .sum();
            assert!(s.is_zero());
        }
    }
}
