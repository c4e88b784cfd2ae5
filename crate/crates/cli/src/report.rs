use troplift_core::num::{fmt_rat, IVec, Rat};
use troplift_core::Error;

/// Human-readable rendering and the exit code of a successful run.
pub trait Render: serde::Serialize {
    fn text(&self) -> String;

    fn code(&self) -> i32 {
        0
    }

    fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_) => 3,
        Error::Semantic(_) | Error::Overflow(_) => 2,
        Error::Ideal(_) => 4,
    }
}

pub(crate) fn qs(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub(crate) fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub(crate) fn vec_text(v: &[i64]) -> String {
    let xs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", xs.join(","))
}

pub(crate) fn list_text(v: &[IVec]) -> String {
    let xs: Vec<String> = v.iter().map(|x| vec_text(x)).collect();
    format!("{{{}}}", xs.join(", "))
}

pub(crate) fn cone_text(rays: &[IVec]) -> String {
    if rays.is_empty() {
        return "{0}".into();
    }
    let xs: Vec<String> = rays.iter().map(|x| vec_text(x)).collect();
    format!("<{}>", xs.join(","))
}

pub(crate) fn func_text(f: &[String]) -> String {
    format!("[{}]", f.join(" "))
}
