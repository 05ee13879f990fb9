//! Source locations. Every token, diagnostic, and AST node carries a
//! [`SourceSpan`] giving its byte extent and 1-based line/column range.

use std::fmt;

/// A half-open byte range `[start_offset, end_offset)` in the source text,
/// with the corresponding 1-based line/column coordinates of both ends.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start_offset: usize,
    pub end_offset: usize,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(
        start_offset: usize,
        end_offset: usize,
        start_line: u32,
        start_col: u32,
        end_line: u32,
        end_col: u32,
    ) -> Self {
        debug_assert!(end_offset >= start_offset);
        debug_assert!((end_line, end_col) >= (start_line, start_col));
        Self {
            start_offset,
            end_offset,
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    /// Span covering a single point (used for EOF and synthesized nodes).
    pub fn point(offset: usize, line: u32, col: u32) -> Self {
        Self::new(offset, offset, line, col, line, col)
    }

    /// Smallest span covering both `self` and `other`.
    pub fn join(&self, other: &SourceSpan) -> SourceSpan {
        let (start_offset, start_line, start_col) = if self.start_offset <= other.start_offset {
            (self.start_offset, self.start_line, self.start_col)
        } else {
            (other.start_offset, other.start_line, other.start_col)
        };
        let (end_offset, end_line, end_col) = if self.end_offset >= other.end_offset {
            (self.end_offset, self.end_line, self.end_col)
        } else {
            (other.end_offset, other.end_line, other.end_col)
        };
        SourceSpan::new(start_offset, end_offset, start_line, start_col, end_line, end_col)
    }

    /// True if `other` lies entirely within `self`.
    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start_offset <= other.start_offset && other.end_offset <= self.end_offset
    }

    /// The source text covered by this span.
    pub fn slice<'s>(&self, source: &'s str) -> &'s str {
        &source[self.start_offset..self.end_offset]
    }
}

// Spans serialize as a compact 6-element array
// [start_offset, end_offset, start_line, start_col, end_line, end_col].
impl serde::Serialize for SourceSpan {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (
            self.start_offset,
            self.end_offset,
            self.start_line,
            self.start_col,
            self.end_line,
            self.end_col,
        )
            .serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for SourceSpan {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (start_offset, end_offset, start_line, start_col, end_line, end_col) =
            <(usize, usize, u32, u32, u32, u32)>::deserialize(deserializer)?;
        Ok(SourceSpan {
            start_offset,
            end_offset,
            start_line,
            start_col,
            end_line,
            end_col,
        })
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_covers_both() {
        let a = SourceSpan::new(2, 5, 1, 3, 1, 6);
        let b = SourceSpan::new(7, 9, 2, 1, 2, 3);
        let j = a.join(&b);
        assert_eq!(j, SourceSpan::new(2, 9, 1, 3, 2, 3));
        assert!(j.contains(&a) && j.contains(&b));
    }

    #[test]
    fn slice_matches_offsets() {
        let src = "qubit q;";
        let s = SourceSpan::new(0, 5, 1, 1, 1, 6);
        assert_eq!(s.slice(src), "qubit");
    }
}
