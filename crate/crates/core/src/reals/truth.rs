use std::fmt;
use std::sync::Arc;

/// Three-valued truth with an undefined middle value.
///
/// Streams of `Truth` must resolve monotonically: once `True` or `False` is
/// reported at some stage, every later stage reports the same value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn is_resolved(self) -> bool {
        self != Truth::Unknown
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    /// Kleene conjunction.
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        })
    }
}

/// A stage-indexed stream of truth values.
#[derive(Clone)]
pub struct TruthStream(Arc<dyn Fn(u64) -> Truth + Send + Sync>);

impl TruthStream {
    pub fn new(f: impl Fn(u64) -> Truth + Send + Sync + 'static) -> Self {
        TruthStream(Arc::new(f))
    }

    pub fn constant(t: Truth) -> Self {
        TruthStream::new(move |_| t)
    }

    /// `Unknown` before `stage`, then `value` forever.
    pub fn resolving_at(stage: u64, value: Truth) -> Self {
        TruthStream::new(move |s| if s >= stage { value } else { Truth::Unknown })
    }

    pub fn at(&self, stage: u64) -> Truth {
        (self.0)(stage)
    }
}

impl fmt::Debug for TruthStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TruthStream(..)")
    }
}
