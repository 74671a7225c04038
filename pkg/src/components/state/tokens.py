from src.core.exceptions import EmptyTokenError


def canonicalize_token(raw: str) -> str:
    """Trim, collapse internal whitespace to single spaces and case-fold"""
    token = " ".join(raw.casefold().split())
    if not token:
        raise EmptyTokenError(f"empty feature token: {raw!r}")
    return token
