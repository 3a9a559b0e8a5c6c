use crate::error::{domain, Error, Result};

/// Largest index with a tabulated Euler number.
pub const MAX_EULER_INDEX: u32 = 30;

// E_0, E_2, ..., E_30
const EULER_EVEN: [i128; 16] = [
    1,
    -1,
    5,
    -61,
    1_385,
    -50_521,
    2_702_765,
    -199_360_981,
    19_391_512_145,
    -2_404_879_675_441,
    370_371_188_237_525,
    -69_348_874_393_137_901,
    15_514_534_163_557_086_905,
    -4_087_072_509_293_123_892_361,
    1_252_259_641_403_629_865_468_285,
    -441_543_893_249_023_104_553_682_821,
];

/// Exact Euler number `E_n` for even `n <= 30`.
pub fn euler_number(n: u32) -> Result<i128> {
    if n % 2 == 1 {
        return domain(format!("Euler number index {n} is odd"));
    }
    if n > MAX_EULER_INDEX {
        return domain(format!("Euler number index {n} exceeds {MAX_EULER_INDEX}"));
    }
    Ok(EULER_EVEN[(n / 2) as usize])
}

/// `n! / (n - m)!`, exact.
pub fn falling_factorial(n: u64, m: u64) -> Result<u128> {
    if m > n {
        return domain(format!("falling factorial needs m <= n, got n={n}, m={m}"));
    }
    (n - m + 1..=n).try_fold(1_u128, |acc, j| {
        acc.checked_mul(j as u128)
            .ok_or(Error::Overflow("falling factorial"))
    })
}
