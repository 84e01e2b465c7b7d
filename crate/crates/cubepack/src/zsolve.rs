//! Exact linear-system solving over `Z_m` by gcd elimination with
//! annihilator tracking (Howell-style row reduction).
//!
//! Used to decide whether a target coverage vector is an integer combination
//! of generator incidence vectors modulo `m`, and to produce one combination
//! when it is. Soundness of `None` relies on the reduced rows spanning the
//! row module with the greedy-reducibility property, which the annihilator
//! reinjection guarantees.

#[derive(Clone)]
struct Row {
    vec: Vec<u64>,
    combo: Vec<u64>,
    lead: usize,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn scale_add(dst: &mut [u64], src: &[u64], c: u64, m: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = ((*d as u128 + c as u128 * s as u128) % m as u128) as u64;
    }
}

fn combine(a: &Row, ca: u64, b: &Row, cb: u64, m: u64) -> Row {
    let mut vec = vec![0u64; a.vec.len()];
    scale_add(&mut vec, &a.vec, ca, m);
    scale_add(&mut vec, &b.vec, cb, m);
    let mut combo = vec![0u64; a.combo.len()];
    scale_add(&mut combo, &a.combo, ca, m);
    scale_add(&mut combo, &b.combo, cb, m);
    let lead = vec.iter().position(|&x| x != 0).unwrap_or(vec.len());
    Row { vec, combo, lead }
}

fn scaled(a: &Row, c: u64, m: u64) -> Row {
    let vec: Vec<u64> = a.vec.iter().map(|&x| mul_mod(x, c, m)).collect();
    let combo: Vec<u64> = a.combo.iter().map(|&x| mul_mod(x, c, m)).collect();
    let lead = vec.iter().position(|&x| x != 0).unwrap_or(vec.len());
    Row { vec, combo, lead }
}

/// One `c` with `c * a ≡ target (mod m)`, if any.
fn solve_scalar(a: u64, target: u64, m: u64) -> Option<u64> {
    let g = gcd(a, m);
    if target % g != 0 {
        return None;
    }
    let m2 = m / g;
    let a2 = (a / g) % m2;
    let t2 = (target / g) % m2;
    if m2 == 1 {
        return Some(0);
    }
    let (_, inv, _) = ext_gcd(a2 as i128, m2 as i128);
    let inv = inv.rem_euclid(m2 as i128) as u64;
    Some(mul_mod(t2, inv, m2))
}

/// Solves `sum_c x_c * gens[c] ≡ b (mod m)` for `x` with entries in `[0, m)`.
/// Returns `None` exactly when no integer combination works modulo `m`.
pub fn solve_mod_linear(gens: &[Vec<u64>], b: &[u64], m: u64) -> Option<Vec<u64>> {
    let cols = gens.len();
    if m == 1 {
        return Some(vec![0; cols]);
    }
    let dim = b.len();
    let mut work: Vec<Row> = Vec::with_capacity(cols);
    for (c, g) in gens.iter().enumerate() {
        assert_eq!(g.len(), dim);
        let vec: Vec<u64> = g.iter().map(|&x| x % m).collect();
        let mut combo = vec![0u64; cols];
        combo[c] = 1;
        let lead = vec.iter().position(|&x| x != 0).unwrap_or(dim);
        if lead < dim {
            work.push(Row { vec, combo, lead });
        }
    }

    let mut pivots: Vec<Row> = Vec::new();
    for col in 0..dim {
        let mut pivot: Option<Row> = None;
        let mut rest = Vec::with_capacity(work.len());
        for row in work.drain(..) {
            if row.vec[col] == 0 {
                if row.lead < dim {
                    rest.push(row);
                }
                continue;
            }
            pivot = Some(match pivot {
                None => row,
                Some(p) => {
                    // unimodular 2x2 combination: preserves the row module
                    let (a, b) = (p.vec[col], row.vec[col]);
                    let (g, s, t) = ext_gcd(a as i128, b as i128);
                    let s = s.rem_euclid(m as i128) as u64;
                    let t = t.rem_euclid(m as i128) as u64;
                    let newp = combine(&p, s, &row, t, m);
                    debug_assert_eq!(newp.vec[col] as i128 % m as i128, g % m as i128);
                    let neg_bg = (m - (b / g as u64) % m) % m;
                    let ag = (a / g as u64) % m;
                    let other = combine(&p, neg_bg, &row, ag, m);
                    debug_assert_eq!(other.vec[col], 0);
                    if other.lead < dim {
                        rest.push(other);
                    }
                    newp
                }
            });
        }
        if let Some(p) = pivot {
            let g = gcd(p.vec[col], m);
            if m / g > 1 {
                let ann = scaled(&p, m / g, m);
                debug_assert_eq!(ann.vec[col], 0);
                if ann.lead < dim {
                    rest.push(ann);
                }
            }
            pivots.push(p);
        }
        work = rest;
    }

    // Greedy reduction of the target against the pivots.
    let mut r: Vec<u64> = b.iter().map(|&x| x % m).collect();
    let mut x = vec![0u64; cols];
    for p in &pivots {
        let col = p.lead;
        if r[col] == 0 {
            continue;
        }
        let c = solve_scalar(p.vec[col], r[col], m)?;
        let neg_c = (m - c) % m;
        scale_add(&mut r, &p.vec, neg_c, m);
        debug_assert_eq!(r[col], 0);
        scale_add(&mut x, &p.combo, c, m);
    }
    if r.iter().any(|&v| v != 0) {
        return None;
    }
    Some(x)
}
