use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

use super::{ModFormError, ModularFormQExp, Weight};
use crate::dirichlet::{carmichael, DirichletChar};
use crate::ring_tower::ZModPr;

/// A newform table: header plus a_1 .. a_T.
#[derive(Clone, Debug, PartialEq)]
pub struct NewformFile {
    pub label: String,
    pub weight: i64,
    pub level: u64,
    pub chi: DirichletChar,
    /// coeffs[n − 1] = a_n
    pub coeffs: Vec<BigRational>,
}

impl NewformFile {
    pub fn precision(&self) -> usize {
        self.coeffs.len() + 1
    }

    /// The q-expansion with a_0 = 0, over ℚ.
    pub fn to_form(&self) -> ModularFormQExp<BigRational> {
        let zero = BigRational::zero();
        let mut c = vec![zero.clone()];
        c.extend(self.coeffs.iter().cloned());
        ModularFormQExp::new(self.level, Weight::Int(self.weight), Some(self.chi.clone()), c, &zero)
    }

    /// Reduction mod p^r; every coefficient must be p-integral.
    pub fn to_form_mod(&self, p: u64, r: u32) -> Result<ModularFormQExp<ZModPr>, ModFormError> {
        let zero = ZModPr::zero(p, r);
        let mut c = vec![zero];
        for a in &self.coeffs {
            c.push(ZModPr::from_rational(p, r, a)?);
        }
        Ok(ModularFormQExp::new(self.level, Weight::Int(self.weight), Some(self.chi.clone()), c, &zero))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn parse_newform(text: &str) -> Result<NewformFile, ModFormError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut header = |key: &str| -> Result<(usize, String), ModFormError> {
        let (no, l) = lines.next().ok_or_else(|| ModFormError::Header(format!("missing `{key}` line")))?;
        let rest = l
            .strip_prefix(key)
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| ModFormError::Parse { line: no, msg: format!("expected `{key} ...`") })?;
        Ok((no, rest.trim().to_string()))
    };
    let (_, label) = header("label")?;
    let (no, w) = header("weight")?;
    let weight: i64 = w.parse().map_err(|_| ModFormError::Parse { line: no, msg: format!("bad weight {w:?}") })?;
    let (no, lv) = header("level")?;
    let level: u64 = lv.parse().map_err(|_| ModFormError::Parse { line: no, msg: format!("bad level {lv:?}") })?;
    let (no, ch) = header("char")?;
    let (m, exps) = ch.split_once(char::is_whitespace).unwrap_or((&ch, ""));
    let bad = |msg: String| ModFormError::Parse { line: no, msg };
    let modulus: u64 = m.parse().map_err(|_| bad(format!("bad character modulus {m:?}")))?;
    let exps: Vec<u64> = exps
        .trim()
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(format!("bad exponent list {exps:?}")))?;
    let chi = DirichletChar::from_unit_exponents(modulus, carmichael(modulus), &exps).map_err(|e| bad(e.to_string()))?;
    if weight < 1 || level == 0 || level % modulus != 0 {
        return Err(ModFormError::Header(format!("weight {weight}, level {level}, character modulus {modulus}")));
    }
    let mut seen: BTreeMap<usize, (usize, BigRational)> = BTreeMap::new();
    for (no, l) in lines {
        let mut it = l.split_whitespace();
        let bad = |msg: &str| ModFormError::Parse { line: no, msg: format!("{msg}: {l:?}") };
        if it.next() != Some("an") {
            return Err(bad("expected `an <n> <num>/<den>`"));
        }
        let n: usize = it.next().and_then(|s| s.parse().ok()).filter(|&n| n >= 1).ok_or_else(|| bad("bad index"))?;
        let a = it.next().and_then(parse_rational).ok_or_else(|| bad("bad coefficient"))?;
        if it.next().is_some() {
            return Err(bad("trailing fields"));
        }
        if let Some((first, _)) = seen.get(&n) {
            return Err(ModFormError::Duplicate { n, first: *first, second: no });
        }
        seen.insert(n, (no, a));
    }
    let t = seen.len();
    if let Some((&last, _)) = seen.iter().next_back() {
        if last != t {
            let missing = (1..=last).find(|n| !seen.contains_key(n)).unwrap();
            return Err(ModFormError::Header(format!("coefficient a_{missing} is missing")));
        }
    }
    let coeffs = seen.into_values().map(|(_, a)| a).collect();
    Ok(NewformFile { label, weight, level, chi, coeffs })
}

pub fn emit_newform(f: &NewformFile) -> String {
    let exps: Vec<String> = f.chi.unit_exponents().iter().map(|e| e.to_string()).collect();
    let mut s = format!("label {}\nweight {}\nlevel {}\nchar {} {}\n", f.label, f.weight, f.level, f.chi.modulus(), exps.join(";"));
    for (i, a) in f.coeffs.iter().enumerate() {
        s.push_str(&format!("an {} {}/{}\n", i + 1, a.numer(), a.denom()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::eta_product;
    use proptest::prelude::*;

    fn sample() -> String {
        let mut s = String::from("# level 11 weight 2\nlabel 11a\nweight 2\nlevel 11\nchar 11 0;0;0;0;0;0;0;0;0;0\n");
        for (n, a) in eta_product(&[(1, 2), (11, 2)], 1, 30).iter().enumerate().skip(1) {
            s.push_str(&format!("an {n} {a}/1\n"));
        }
        s
    }

    #[test]
    fn parse_and_round_trip() {
        let f = parse_newform(&sample()).unwrap();
        assert_eq!(f.label, "11a");
        assert_eq!(f.coeffs.len(), 29);
        assert_eq!(f.to_form().coeff(2), BigRational::from_integer((-2).into()));
        let e = emit_newform(&f);
        assert_eq!(parse_newform(&e).unwrap(), f);
        assert_eq!(emit_newform(&parse_newform(&e).unwrap()), e);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let dup = format!("{}an 3 5/1\n", sample());
        match parse_newform(&dup) {
            Err(ModFormError::Duplicate { n: 3, first: 8, second }) => assert_eq!(second, 35),
            other => panic!("{other:?}"),
        }
        let bad = sample().replace("an 7 -2/1", "an 7 x/1");
        assert!(matches!(parse_newform(&bad), Err(ModFormError::Parse { line: 12, .. })));
        let gap = sample().replace("an 7 -2/1\n", "");
        assert!(matches!(parse_newform(&gap), Err(ModFormError::Header(_))));
        let wrong = sample().replace("level 11", "level 12");
        assert!(matches!(parse_newform(&wrong), Err(ModFormError::Header(_))));
        assert!(parse_newform("label x\nweight 2\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_random(coeffs in proptest::collection::vec((-1000i64..1000, 1i64..50), 1..40), e in 0u64..4) {
            let chi = DirichletChar::all(5).into_iter().nth(e as usize).unwrap();
            let f = NewformFile {
                label: "t".into(),
                weight: 3,
                level: 25,
                chi,
                coeffs: coeffs.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect(),
            };
            let s = emit_newform(&f);
            let g = parse_newform(&s).unwrap();
            prop_assert_eq!(&g, &f);
            prop_assert_eq!(emit_newform(&g), s);
        }
    }
}
