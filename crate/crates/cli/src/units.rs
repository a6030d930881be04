//! Quantities written as `"<number> <unit>"`.
//!
//! Conversion to SI shifts the decimal exponent of the literal before it is
//! parsed, so `"3.63e-3 cm"` and `"3.63e-5 m"` give the same `f64` bits.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Wavenumber,
}

impl Dimension {
    fn table(self) -> &'static [(&'static str, i32)] {
        match self {
            Dimension::Length => &[("m", 0), ("cm", -2), ("um", -6), ("µm", -6), ("nm", -9)],
            Dimension::Wavenumber => &[("1/m", 0), ("1/cm", 2)],
        }
    }

    pub fn suffixes(self) -> String {
        self.table()
            .iter()
            .map(|(s, _)| *s)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitError {
    /// No recognised suffix for the dimension.
    Suffix { expected: String },
    /// The numeric part does not parse.
    Number,
}

/// Parses `text` into SI units of `dim`.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, UnitError> {
    let text = text.trim();
    let (number, unit) = match text.find(char::is_whitespace) {
        Some(i) => (&text[..i], text[i..].trim()),
        None => {
            return Err(UnitError::Suffix {
                expected: dim.suffixes(),
            })
        }
    };
    let shift = dim
        .table()
        .iter()
        .find(|(s, _)| *s == unit)
        .map(|(_, e)| *e)
        .ok_or_else(|| UnitError::Suffix {
            expected: dim.suffixes(),
        })?;
    shift_decimal(number, shift)
}

/// Parses `number * 10^shift` with a single rounding.
fn shift_decimal(number: &str, shift: i32) -> Result<f64, UnitError> {
    let (mantissa, exponent) = match number.find(['e', 'E']) {
        Some(i) => (
            &number[..i],
            number[i + 1..]
                .parse::<i32>()
                .map_err(|_| UnitError::Number)?,
        ),
        None => (number, 0),
    };
    if mantissa.is_empty()
        || !mantissa
            .trim_start_matches(['+', '-'])
            .chars()
            .all(|c| c.is_ascii_digit() || c == '.')
    {
        return Err(UnitError::Number);
    }
    let value: f64 = format!("{mantissa}e{}", exponent + shift)
        .parse()
        .map_err(|_| UnitError::Number)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(UnitError::Number)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centimetres_are_exact() {
        let a = parse_quantity("3.63e-3 cm", Dimension::Length).unwrap();
        let b = parse_quantity("3.63e-5 m", Dimension::Length).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert_eq!(a, 3.63e-5);
    }

    #[test]
    fn other_suffixes() {
        assert_eq!(
            parse_quantity("36.3 um", Dimension::Length).unwrap(),
            36.3e-6
        );
        assert_eq!(
            parse_quantity("36.3 µm", Dimension::Length).unwrap(),
            36.3e-6
        );
        assert_eq!(parse_quantity("589 nm", Dimension::Length).unwrap(), 589e-9);
        assert_eq!(
            parse_quantity("2.75e-7 cm", Dimension::Length).unwrap(),
            2.75e-9
        );
        assert_eq!(
            parse_quantity("1.07e5 1/cm", Dimension::Wavenumber).unwrap(),
            1.07e7
        );
        assert_eq!(
            parse_quantity("  7 1/m ", Dimension::Wavenumber).unwrap(),
            7.0
        );
    }

    #[test]
    fn rejects_missing_or_wrong_units() {
        assert!(matches!(
            parse_quantity("3.63e-5", Dimension::Length),
            Err(UnitError::Suffix { .. })
        ));
        assert!(matches!(
            parse_quantity("3 1/cm", Dimension::Length),
            Err(UnitError::Suffix { .. })
        ));
        assert!(matches!(
            parse_quantity("3 cm", Dimension::Wavenumber),
            Err(UnitError::Suffix { .. })
        ));
        assert_eq!(
            parse_quantity("abc m", Dimension::Length),
            Err(UnitError::Number)
        );
        assert_eq!(
            parse_quantity("1e400 m", Dimension::Length),
            Err(UnitError::Number)
        );
        assert_eq!(
            parse_quantity("inf m", Dimension::Length),
            Err(UnitError::Number)
        );
    }
}
