//! Textual literals for quaternions and group elements.
//!
//! Quaternions are written `w+xi+yj+zk` with omitted zero terms allowed
//! (`1+2i`, `-k`, `3`). A group element is a semicolon-separated list of
//! quaternion literals followed by the center triple: `1+2i;j;0,0,1`.

use crate::error::HqError;
use crate::group::GroupElement;
use crate::quaternion::Quaternion;

fn parse_term(term: &str) -> Result<(f64, usize), HqError> {
    // returns (coefficient, component index) with 0 = real, 1..3 = i,j,k
    let bad = || HqError::Parse(format!("bad quaternion term {term:?}"));
    let (body, idx) = match term.chars().last() {
        Some('i') | Some('I') => (&term[..term.len() - 1], 1),
        Some('j') | Some('J') => (&term[..term.len() - 1], 2),
        Some('k') | Some('K') => (&term[..term.len() - 1], 3),
        Some(_) => (term, 0),
        None => return Err(bad()),
    };
    let coeff = match body {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    if idx == 0 && matches!(body, "" | "+" | "-") {
        return Err(bad());
    }
    Ok((coeff, idx))
}

/// Parses a quaternion literal `w+xi+yj+zk`.
pub fn parse_quaternion(s: &str) -> Result<Quaternion, HqError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(HqError::Parse("empty quaternion literal".into()));
    }
    // split into signed terms; '+'/'-' after an exponent marker stays put
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for (pos, ch) in s.char_indices().skip(1) {
        if (ch == '+' || ch == '-') && !matches!(bytes[pos - 1], b'e' | b'E') {
            terms.push(&s[start..pos]);
            start = pos;
        }
    }
    terms.push(&s[start..]);

    let mut c = [0.0f64; 4];
    for term in terms {
        let (coeff, idx) = parse_term(term)?;
        c[idx] += coeff;
    }
    Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
}

/// Formats a quaternion as a literal accepted by [`parse_quaternion`].
pub fn format_quaternion(q: &Quaternion) -> String {
    let mut out = String::new();
    for (c, unit) in [(q.w, ""), (q.x, "i"), (q.y, "j"), (q.z, "k")] {
        if c == 0.0 {
            continue;
        }
        if !out.is_empty() && c >= 0.0 {
            out.push('+');
        }
        out.push_str(&format!("{c}{unit}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses a group-element literal `q1;...;qn;t1,t2,t3`.
pub fn parse_point(s: &str) -> Result<GroupElement, HqError> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() < 2 {
        return Err(HqError::Parse(format!(
            "point literal {s:?} needs at least one quaternion and the center triple"
        )));
    }
    let (center, quats) = parts.split_last().unwrap();
    let t_parts: Vec<&str> = center.split(',').collect();
    if t_parts.len() != 3 {
        return Err(HqError::Parse(format!(
            "center part {center:?} must be t1,t2,t3"
        )));
    }
    let mut t = [0.0f64; 3];
    for (slot, p) in t.iter_mut().zip(&t_parts) {
        *slot = p
            .trim()
            .parse::<f64>()
            .map_err(|_| HqError::Parse(format!("bad center component {p:?}")))?;
    }
    let u = quats
        .iter()
        .map(|q| parse_quaternion(q))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupElement::new(u, t))
}

/// Formats a group element as a literal accepted by [`parse_point`].
pub fn format_point(v: &GroupElement) -> String {
    let mut parts: Vec<String> = v.u.iter().map(format_quaternion).collect();
    parts.push(format!("{},{},{}", v.t[0], v.t[1], v.t[2]));
    parts.join(";")
}
