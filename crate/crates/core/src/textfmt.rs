//! Shared helpers for the line-oriented text formats (`#` starts a comment).

/// Yields (1-based line number, whitespace-split tokens) for non-empty lines.
pub(crate) fn tokenized_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            None
        } else {
            Some((i + 1, tokens))
        }
    })
}

/// Names that can appear as elements, gates, states or letters in the text formats.
pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(['#', '[', ']']) && !name.chars().any(char::is_whitespace)
}
