use std::sync::OnceLock;

use num_rational::Ratio;

use crate::{Error, Result};

/// Largest `m` accepted by [`bernoulli_even`]; `B_30` still fits in `i64`.
pub const MAX_BERNOULLI_INDEX: u32 = 15;

const TABLE_LEN: usize = 2 * MAX_BERNOULLI_INDEX as usize + 1;

fn table() -> &'static [Ratio<i128>; TABLE_LEN] {
    static TABLE: OnceLock<[Ratio<i128>; TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{k=0}^{n} C(n+1, k) B_k = 0 for n >= 1
        let mut b = [Ratio::from_integer(0i128); TABLE_LEN];
        b[0] = Ratio::from_integer(1);
        for n in 1..TABLE_LEN {
            let mut acc = Ratio::from_integer(0i128);
            let mut binom: i128 = 1; // C(n+1, k)
            for (k, bk) in b.iter().enumerate().take(n) {
                acc += *bk * binom;
                binom = binom * (n as i128 + 1 - k as i128) / (k as i128 + 1);
            }
            b[n] = -acc / (n as i128 + 1);
        }
        b
    })
}

/// Exact Bernoulli number `B_{2m}` for `1 <= m <= 15`.
pub fn bernoulli_even(m: u32) -> Result<Ratio<i64>> {
    if m == 0 || m > MAX_BERNOULLI_INDEX {
        return Err(Error::Domain(format!(
            "bernoulli_even expects 1 <= m <= {MAX_BERNOULLI_INDEX}, got {m}"
        )));
    }
    let b = table()[2 * m as usize];
    Ok(Ratio::new_raw(*b.numer() as i64, *b.denom() as i64))
}
