use super::{AuthorKey, IngestError};

/// Trims and collapses every whitespace run to a single space.
pub fn normalize_whitespace(raw: &str) -> String {
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Canonical author identity: trimmed, whitespace collapsed, case-folded,
/// with trailing periods removed from initials (`"A. Dembo"` -> `"a dembo"`).
pub fn normalize_author_name(raw: &str) -> Result<AuthorKey, IngestError> {
    let tokens: Vec<String> = raw
        .split_whitespace()
        .map(|t| {
            let t = t.to_lowercase();
            if is_initial(&t) {
                t.trim_end_matches('.').to_string()
            } else {
                t
            }
        })
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(IngestError::EmptyName);
    }
    Ok(AuthorKey::from_canonical(tokens.join(" ")))
}

/// `a.`, `j.r.`, `j.-p.` and bare runs of dots count as initials.
fn is_initial(token: &str) -> bool {
    if !token.ends_with('.') {
        return false;
    }
    token
        .trim_end_matches('.')
        .split('.')
        .all(|seg| seg.split('-').all(|s| s.chars().count() <= 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(s: &str) -> String {
        normalize_author_name(s).unwrap().as_str().to_string()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(norm("Amir Dembo"), "amir dembo");
        assert_eq!(norm("  Ioannis   Kontoyiannis "), "ioannis kontoyiannis");
        assert_eq!(norm("A. Dembo"), "a dembo");
        assert_eq!(norm("J.R. Tolkien"), "j.r tolkien");
        assert_eq!(norm("Martin Luther King Jr."), "martin luther king jr.");
        assert_eq!(norm("\tMARKO\nA.  Rodriguez"), "marko a rodriguez");
    }

    #[test]
    fn empty_names_rejected() {
        assert_eq!(normalize_author_name("   "), Err(IngestError::EmptyName));
        assert_eq!(normalize_author_name(""), Err(IngestError::EmptyName));
        assert_eq!(normalize_author_name(" . "), Err(IngestError::EmptyName));
    }

    #[test]
    fn whitespace_helper() {
        assert_eq!(
            normalize_whitespace("  Annals of\n  Applied Probability "),
            "Annals of Applied Probability"
        );
    }

    proptest::proptest! {
        #[test]
        fn normalization_is_idempotent(raw in "[ a-zA-Z.\\-\t]{0,40}") {
            if let Ok(once) = normalize_author_name(&raw) {
                let twice = normalize_author_name(once.as_str()).unwrap();
                proptest::prop_assert_eq!(once, twice);
            }
        }
    }
}
