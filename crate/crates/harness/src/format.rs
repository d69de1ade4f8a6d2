//! Number formatting for the CSV and report files.

/// Scientific notation with seven significant digits and a signed
/// three-digit exponent, e.g. `1.500000E+003` or `4.440892E-016`.
pub fn sci(x: f64) -> String {
    if x == 0.0 {
        return "0.000000E+000".to_string();
    }
    let formatted = format!("{:.6e}", x);
    let (mantissa, exponent) = formatted
        .split_once('e')
        .expect("float exponent formatting always contains `e`");
    let exponent: i32 = exponent
        .parse()
        .expect("float exponent is a decimal integer");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:03}", exponent.abs())
}

/// The value a reader of the CSV sees: `x` pushed through its serialized
/// form and back. Summary statistics are computed over these so the
/// published files stay self-consistent.
pub fn published(x: f64) -> f64 {
    sci(x)
        .parse()
        .expect("serialized numbers parse back to floats")
}
