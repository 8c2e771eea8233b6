//! JSON writer with a fixed float format: 17 significant digits, shortest
//! trailing zeros removed, non-finite values written as null.

use serde_json::Value;

pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.16e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if x < 0.0 { "-" } else { "" };
    if !(-5..17).contains(&exp) {
        let rest = digits[1..].trim_end_matches('0');
        let rest = if rest.is_empty() { "0" } else { rest };
        return format!("{sign}{}.{rest}e{exp}", &digits[..1]);
    }
    let (int, frac) = if exp >= 0 {
        let e = exp as usize + 1;
        if e >= digits.len() {
            (format!("{digits}{}", "0".repeat(e - digits.len())), String::new())
        } else {
            (digits[..e].to_string(), digits[e..].to_string())
        }
    } else {
        ("0".to_string(), format!("{}{digits}", "0".repeat((-exp - 1) as usize)))
    };
    let frac = frac.trim_end_matches('0');
    let frac = if frac.is_empty() { "0" } else { frac };
    format!("{sign}{int}.{frac}")
}

fn write_value(out: &mut String, v: &Value, indent: Option<usize>, depth: usize) {
    let newline = |out: &mut String, d: usize| {
        if let Some(w) = indent {
            out.push('\n');
            out.push_str(&" ".repeat(w * d));
        }
    };
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => out.push_str(&i.to_string()),
            (_, Some(u)) => out.push_str(&u.to_string()),
            _ => out.push_str(&format_f64(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                write_value(out, item, indent, depth + 1);
            }
            newline(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push(':');
                if indent.is_some() {
                    out.push(' ');
                }
                write_value(out, item, indent, depth + 1);
            }
            newline(out, depth);
            out.push('}');
        }
    }
}

pub fn render(v: &Value, pretty: bool) -> String {
    let mut out = String::new();
    write_value(&mut out, v, pretty.then_some(2), 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for x in [
            std::f64::consts::PI,
            -1e-7,
            12.566370614359172,
            0.1,
            1e300,
            -5e-324,
            123456789.0,
            1.0,
        ] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_f64(std::f64::consts::FRAC_PI_2), "1.5707963267948966");
        assert_eq!(format_f64(2.0), "2.0");
        assert_eq!(format_f64(-0.25), "-0.25");
        assert_eq!(format_f64(1.5e-9), "1.5e-9");
        assert_eq!(format_f64(f64::NAN), "null");
    }

    #[test]
    fn compact_and_pretty_layouts() {
        let v = json!({"b": [1, 2.5], "a": {}, "c": "x\"y"});
        assert_eq!(render(&v, false), r#"{"a":{},"b":[1,2.5],"c":"x\"y"}"#);
        assert_eq!(
            render(&v, true),
            "{\n  \"a\": {},\n  \"b\": [\n    1,\n    2.5\n  ],\n  \"c\": \"x\\\"y\"\n}"
        );
    }
}
