use prescope_core::telescope::{Bound, SumRange};
use prescope_core::term::{linear_form, parse};

/// Parses `LO..HI` where each end is an integer, an integer-linear form in
/// `n`, `-inf` or `inf`.
pub fn parse_range(text: &str) -> Result<SumRange, String> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| format!("range '{text}' is not of the form LO..HI"))?;
    let lo = parse_bound(lo)?;
    let hi = parse_bound(hi)?;
    if lo == Bound::PosInf || hi == Bound::NegInf {
        return Err(format!("range '{text}' is empty"));
    }
    Ok(SumRange { lo, hi })
}

fn parse_bound(text: &str) -> Result<Bound, String> {
    let t = text.trim();
    match t {
        "-inf" => return Ok(Bound::NegInf),
        "inf" | "+inf" => return Ok(Bound::PosInf),
        _ => {}
    }
    let e = parse(t).map_err(|e| format!("bound '{t}': {e}"))?;
    let l = linear_form(&e).ok_or_else(|| format!("bound '{t}' is not integer-linear"))?;
    if l.k != 0 {
        return Err(format!("bound '{t}' depends on k"));
    }
    Ok(Bound::At(l))
}
