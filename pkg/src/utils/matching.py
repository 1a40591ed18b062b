"""Fuzzy key suggestions for configuration validation."""

from fuzzywuzzy import process

# Minimum fuzzy score before a suggestion is offered
SUGGESTION_SCORE = 70


def suggest_key(key, choices, min_score=SUGGESTION_SCORE):
    """Return the closest known key to ``key`` or None when nothing scores high enough."""
    choices = list(choices)
    if not choices:
        return None
    match, score = process.extractOne(str(key).lower(), [c.lower() for c in choices])
    if score < min_score:
        return None
    return choices[[c.lower() for c in choices].index(match)]


def unknown_key_message(key, choices, where):
    """Build the error text for an unknown key, with a 'did you mean' hint when possible."""
    hint = suggest_key(key, choices)
    message = f"Unknown key '{key}' in {where}"
    if hint is not None:
        message += f" (did you mean '{hint}'?)"
    return message
