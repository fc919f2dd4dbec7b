//! Small helpers shared by the line-oriented text formats.

use std::borrow::Cow;

/// Percent-escapes whitespace, control characters and `%` so that a key is
/// always a single whitespace-free token.
pub fn escape_key(key: &str) -> Cow<'_, str> {
    if !key.chars().any(needs_escape) {
        return Cow::Borrowed(key);
    }
    let mut out = String::with_capacity(key.len() + 8);
    for c in key.chars() {
        if needs_escape(c) {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        } else {
            out.push(c);
        }
    }
    Cow::Owned(out)
}

fn needs_escape(c: char) -> bool {
    c == '%' || c.is_whitespace() || c.is_control()
}

/// Inverse of [`escape_key`]. Returns `None` on a truncated or non-hex escape
/// or when the decoded bytes are not UTF-8.
pub fn unescape_key(token: &str) -> Option<String> {
    if !token.contains('%') {
        return Some(token.to_string());
    }
    let bytes = token.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = token.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

/// Formats a float with 12 significant digits in the style of C's `%.12g`.
pub fn format_sig12(value: f64) -> String {
    const DIGITS: i32 = 12;
    if value == 0.0 {
        return if value.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !value.is_finite() {
        return format!("{value}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{value:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes() {
        assert_eq!(escape_key("amir dembo"), "amir%20dembo");
        assert_eq!(escape_key("100%"), "100%25");
        assert_eq!(escape_key("a\tb\nc"), "a%09b%0Ac");
        assert_eq!(escape_key("oai:CiteSeerPSU:1"), "oai:CiteSeerPSU:1");
        assert_eq!(escape_key("non\u{a0}breaking"), "non%C2%A0breaking");
    }

    #[test]
    fn bad_escapes() {
        assert_eq!(unescape_key("%2"), None);
        assert_eq!(unescape_key("%zz"), None);
        assert_eq!(unescape_key("%FF"), None);
    }

    #[test]
    fn sig12() {
        assert_eq!(format_sig12(4.0 / 3.0), "1.33333333333");
        assert_eq!(format_sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(-0.5), "-0.5");
        assert_eq!(format_sig12(1234.5), "1234.5");
        assert_eq!(format_sig12(1e-7), "1e-07");
        assert_eq!(format_sig12(1.5e15), "1.5e+15");
        assert_eq!(format_sig12(0.0001), "0.0001");
        assert_eq!(format_sig12(999999999999.9), "1e+12");
    }

    proptest::proptest! {
        #[test]
        fn escape_round_trip(s in "\\PC{0,24}") {
            let esc = escape_key(&s);
            proptest::prop_assert!(!esc.chars().any(char::is_whitespace));
            proptest::prop_assert_eq!(unescape_key(&esc).unwrap(), s);
        }
    }
}
