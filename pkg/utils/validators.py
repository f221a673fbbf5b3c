"""
Validators - Identifier rules shared by the parser and the model constructors
"""

import re
from config.settings import config

IDENTIFIER_PATTERN = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')

# Surface keywords that may not be used as names
RESERVED_WORDS = frozenset({
    'Top', 'Bottom', 'Not', 'And', 'Or', 'All', 'Some',
    'SubClassOf', 'ClassAssertion', 'PropertyAssertion',
})


def is_identifier(text):
    """Check that text is a syntactically valid name/role/individual"""
    return isinstance(text, str) and IDENTIFIER_PATTERN.fullmatch(text) is not None


def is_fresh_name(text):
    """Check whether a name lives in the reasoner's reserved namespace"""
    return text.startswith(config.FRESH_INDIVIDUAL_PREFIX)


def validate_name(text, kind='name'):
    """
    Validate a user-supplied identifier

    Args:
        text: Identifier to check
        kind: Human-readable kind for the error message

    Returns:
        None if valid, otherwise an error message
    """
    if not is_identifier(text):
        return f"invalid {kind} '{text}'"
    if text in RESERVED_WORDS:
        return f"{kind} '{text}' is a reserved word"
    if is_fresh_name(text):
        return f"{kind} '{text}' uses the reserved prefix '{config.FRESH_INDIVIDUAL_PREFIX}'"
    return None
