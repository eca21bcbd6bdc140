//! Brute-force reference computations. Each one avoids the code path it is
//! used to check: congruence counting instead of symbols, linear algebra
//! instead of the Cartier operator, enumeration instead of closed forms.

use std::collections::BTreeMap;

/// Whether `x a^2 + y b^2 = c^2` has a primitive solution modulo `p^k`
/// (not all of `a, b, c` divisible by `p`).
pub fn conic_solvable_mod_prime_power(x: i64, y: i64, p: u64, k: u32) -> bool {
    let m = p.pow(k) as i128;
    let md = |v: i128| v.rem_euclid(m) as usize;
    let (x, y) = (x as i128, y as i128);
    let mut y_squares = vec![false; m as usize];
    let mut p_squares = vec![false; m as usize];
    for b in 0..m {
        y_squares[md(y * b * b)] = true;
    }
    for c in (0..m).step_by(p as usize) {
        p_squares[md(c * c)] = true;
    }
    // c a unit, scaled to 1
    if (0..m).any(|a| y_squares[md(1 - x * a * a)]) {
        return true;
    }
    // p | c, a a unit scaled to 1
    if (0..m).any(|b| p_squares[md(x + y * b * b)]) {
        return true;
    }
    // p | a, p | c, b a unit scaled to 1
    (0..m).step_by(p as usize).any(|a| p_squares[md(x * a * a + y)])
}

/// Whether the polynomial 2-form `h ds ^ dt` (`deg h <= deg`) equals
/// `d(f ds + g dt)` for polynomials `f, g` of degree `<= deg + 1`, decided by
/// Gaussian elimination on the coefficient system over `F_p`.
pub fn polynomial_2form_is_exact(p: u64, h: &BTreeMap<(u32, u32), u64>, deg: u32) -> bool {
    let monomials: Vec<(u32, u32)> =
        (0..=deg + 1).flat_map(|i| (0..=deg + 1 - i).map(move |j| (i, j))).collect();
    let row_of: BTreeMap<(u32, u32), usize> = monomials.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let n = monomials.len();
    // columns: f_m for each monomial, then g_m, then the right-hand side
    let mut a = vec![vec![0u64; 2 * n + 1]; n];
    for (c, &(i, j)) in monomials.iter().enumerate() {
        // -d/dt of f_(i,j) s^i t^j lands on (i, j-1)
        if j > 0 {
            a[row_of[&(i, j - 1)]][c] = (p - (j as u64 % p)) % p;
        }
        // d/ds of g_(i,j) s^i t^j lands on (i-1, j)
        if i > 0 {
            a[row_of[&(i - 1, j)]][n + c] = i as u64 % p;
        }
    }
    for (&m, &v) in h {
        match row_of.get(&m) {
            Some(&r) => a[r][2 * n] = v % p,
            None => return false,
        }
    }
    let mut rank = 0;
    for col in 0..2 * n {
        let Some(piv) = (rank..n).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, piv);
        let inv = crate::arith::integer::inv_mod(a[rank][col], p).unwrap();
        for v in a[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..n {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..=2 * n {
                    a[r][c] = (a[r][c] + p * p - f * a[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    a[rank..].iter().all(|row| row[2 * n] == 0)
}

/// Partial sum of `sum_k (-1)^k / (2k+1)^2`, Catalan's constant, summed
/// from the small terms up.
pub fn catalan_series(terms: usize) -> f64 {
    (0..terms)
        .rev()
        .map(|k| {
            let d = (2 * k + 1) as f64;
            if k % 2 == 0 { 1.0 / (d * d) } else { -1.0 / (d * d) }
        })
        .sum()
}
