//! Number formatting shared by CSV and text output.

/// `x` with 12 significant digits, fixed notation for moderate exponents and
/// scientific otherwise, trailing zeros removed.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&e) {
        let decimals = (11 - e).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        let m = format!("{x:.11e}");
        match m.split_once('e') {
            Some((mant, exp)) => format!("{}e{}", trim(mant.to_string()), exp),
            None => m,
        }
    };
    // Rounding can carry into a new digit (9.99…→10.0); re-check via scientific.
    if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 12 {
        let m = format!("{x:.11e}");
        if let Some((mant, exp)) = m.split_once('e') {
            return format!("{}e{}", trim(mant.to_string()), exp);
        }
    }
    s
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
