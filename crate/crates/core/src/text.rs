//! Turkish-aware case folding.

/// Lowercase `s` following Turkish orthography: dotted capital `İ` folds to
/// `i` and dotless capital `I` folds to `ı`. Everything else uses the default
/// Unicode lowercase mapping.
pub fn turkish_fold(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'I' => out.push('ı'),
            'İ' => out.push('i'),
            _ => out.extend(c.to_lowercase()),
        }
    }
    out
}
