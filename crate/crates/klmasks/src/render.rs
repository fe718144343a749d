//! Text and SVG pictures of heaps, optionally decorated with one glyph per entry.
//!
//! Column `c` of the heap is drawn at horizontal slot `c`, and higher levels
//! are drawn nearer the top, so the left end of the word is at the top.

use std::fmt::Write;

use crate::heap::Heap;
use crate::mask::classify;

const CELL: usize = 3;
const SVG_STEP: f64 = 32.0;
const SVG_RADIUS: f64 = 11.0;

/// One row per level, one slot of width three per column, and a footer naming
/// the generators. Entries show their glyph, or `o` when none is given.
pub fn heap_ascii(heap: &Heap, glyphs: Option<&[char]>) -> String {
    let n = heap.n();
    let width = CELL * (n - 1);
    let mut out = String::new();
    if !heap.is_empty() {
        let top = *heap.levels().iter().max().expect("nonempty");
        let bottom = *heap.levels().iter().min().expect("nonempty");
        for level in (bottom..=top).rev() {
            let mut row = vec![' '; width];
            for j in (0..heap.len()).filter(|&j| heap.level(j) == level) {
                let slot = CELL * (heap.column(j) - 1) + 1;
                row[slot] = glyphs.map_or('o', |g| g[j]);
            }
            out.push_str(row.iter().collect::<String>().trim_end());
            out.push('\n');
        }
    }
    for c in 1..n {
        let _ = write!(out, "{:<width$}", format!("s{c}"), width = CELL);
    }
    let trimmed = out.trim_end().len();
    out.truncate(trimmed);
    out.push('\n');
    out
}

/// The heap of the mask's word with mask glyphs: `0` and `1` for plain
/// entries, `D` for zero-defects and `d` for one-defects.
pub fn mask_ascii(n: usize, word: &[usize], bits: &[bool]) -> crate::Result<String> {
    let heap = Heap::new(n, word)?;
    let (classes, _) = classify(n, word, bits);
    let glyphs: Vec<char> = classes.iter().map(|c| c.glyph()).collect();
    Ok(heap_ascii(&heap, Some(&glyphs)))
}

/// Standalone SVG: cover edges as lines, entries as labelled circles.
pub fn heap_svg(heap: &Heap, glyphs: Option<&[char]>) -> String {
    let n = heap.n();
    let (top, bottom) = if heap.is_empty() {
        (0, 0)
    } else {
        (*heap.levels().iter().max().expect("nonempty"), *heap.levels().iter().min().expect("nonempty"))
    };
    let rows = (top - bottom + 1) as f64;
    let width = SVG_STEP * n as f64;
    let height = SVG_STEP * (rows + 1.0);
    let at = |j: usize| (SVG_STEP * heap.column(j) as f64, SVG_STEP * ((top - heap.level(j)) as f64 + 0.5));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">"#
    );
    for &(a, b) in heap.covers() {
        let ((x1, y1), (x2, y2)) = (at(a), at(b));
        let _ = writeln!(out, r#"  <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black"/>"#);
    }
    for j in 0..heap.len() {
        let (x, y) = at(j);
        let label = glyphs.map_or_else(|| format!("s{}", heap.column(j)), |g| g[j].to_string());
        let fill = match glyphs.map(|g| g[j]) {
            Some('D') | Some('d') => "#f4c7c3",
            Some('0') => "#dddddd",
            _ => "white",
        };
        let _ = writeln!(out, r#"  <circle cx="{x}" cy="{y}" r="{SVG_RADIUS}" fill="{fill}" stroke="black"/>"#);
        let _ = writeln!(out, r#"  <text x="{x}" y="{}" text-anchor="middle">{label}</text>"#, y + 4.0);
    }
    for c in 1..n {
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" text-anchor="middle">s{c}</text>"#,
            SVG_STEP * c as f64,
            height - SVG_STEP / 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn mask_svg(n: usize, word: &[usize], bits: &[bool]) -> crate::Result<String> {
    let heap = Heap::new(n, word)?;
    let (classes, _) = classify(n, word, bits);
    let glyphs: Vec<char> = classes.iter().map(|c| c.glyph()).collect();
    Ok(heap_svg(&heap, Some(&glyphs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_heap_picture() {
        let h = Heap::new(5, &[2, 3, 1, 2, 4]).unwrap();
        assert_eq!(heap_ascii(&h, None), "    o\n o     o\n    o     o\ns1 s2 s3 s4\n");
    }

    #[test]
    fn mask_glyphs() {
        let s = mask_ascii(3, &[1, 2, 1], &[true, false, true]).unwrap();
        assert_eq!(s, " 1\n    0\n d\ns1 s2\n");
    }

    #[test]
    fn svg_is_well_formed() {
        let h = Heap::new(3, &[1, 2, 1]).unwrap();
        let s = heap_svg(&h, None);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 3);
    }
}
