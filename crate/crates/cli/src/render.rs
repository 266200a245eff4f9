use num_complex::Complex64;

pub fn complex(z: Complex64) -> String {
    format!("{:.9} {} {:.9}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

pub fn check(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

pub fn optional_check(ok: Option<bool>) -> &'static str {
    match ok {
        Some(ok) => check(ok),
        None => "n/a",
    }
}
