//! Choice of coefficient field at run time.

use std::fmt;
use std::str::FromStr;

/// Environment variable naming the default characteristic.
pub const CHAR_ENV: &str = "CHERN_CHAR";

/// Primes with a compiled field instance.
pub const SUPPORTED_PRIMES: [u64; 5] = [5, 101, 32003, 65521, 2147483647];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Prime(u64),
    Rationals,
}

impl Default for FieldChoice {
    fn default() -> Self {
        FieldChoice::Prime(chern_core::DEFAULT_PRIME as u64)
    }
}

impl FieldChoice {
    pub fn from_prime(p: u64) -> Result<Self, String> {
        if p == 0 {
            return Ok(FieldChoice::Rationals);
        }
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(FieldChoice::Prime(p))
        } else {
            Err(format!("unsupported characteristic {p}; choose one of {SUPPORTED_PRIMES:?} or QQ"))
        }
    }

    /// The job's field, else `CHERN_CHAR`, else the default prime.
    pub fn resolve(explicit: Option<FieldChoice>) -> Result<Self, String> {
        if let Some(f) = explicit {
            return Ok(f);
        }
        match std::env::var(CHAR_ENV) {
            Ok(v) if !v.trim().is_empty() => v.parse(),
            _ => Ok(FieldChoice::default()),
        }
    }
}

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("qq") || t == "0" {
            return Ok(FieldChoice::Rationals);
        }
        let inner = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).unwrap_or(t);
        let p: u64 = inner.parse().map_err(|_| format!("cannot read a field from {s:?}"))?;
        FieldChoice::from_prime(p)
    }
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Prime(p) => write!(f, "GF({p})"),
            FieldChoice::Rationals => write!(f, "QQ"),
        }
    }
}

/// Run `$body` with `$f` bound to the concrete field type.
#[macro_export]
macro_rules! with_field {
    ($choice:expr, $f:ident => $body:expr) => {
        match $choice {
            $crate::dispatch::FieldChoice::Rationals => {
                type $f = chern_core::Rational;
                $body
            }
            $crate::dispatch::FieldChoice::Prime(5) => {
                type $f = chern_core::Fp<5>;
                $body
            }
            $crate::dispatch::FieldChoice::Prime(101) => {
                type $f = chern_core::Fp<101>;
                $body
            }
            $crate::dispatch::FieldChoice::Prime(65521) => {
                type $f = chern_core::Fp<65521>;
                $body
            }
            $crate::dispatch::FieldChoice::Prime(2147483647) => {
                type $f = chern_core::Fp<2147483647>;
                $body
            }
            _ => {
                type $f = chern_core::F32003;
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_choices() {
        assert_eq!("QQ".parse::<FieldChoice>().unwrap(), FieldChoice::Rationals);
        assert_eq!("GF(101)".parse::<FieldChoice>().unwrap(), FieldChoice::Prime(101));
        assert!("7".parse::<FieldChoice>().is_err());
        assert_eq!(FieldChoice::Prime(65521).to_string(), "GF(65521)");
    }

    #[test]
    fn dispatch_selects_the_field() {
        use chern_core::Field;
        for (c, want) in [(FieldChoice::Prime(101), 101), (FieldChoice::Rationals, 0), (FieldChoice::default(), 32003)]
        {
            let got = with_field!(c, F => F::characteristic());
            assert_eq!(got, want);
        }
    }
}
