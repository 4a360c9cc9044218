"""Shared record of acceptance-criterion outcomes for the terminal summary."""

# criterion id -> (passed, description)
RESULTS: dict[int, tuple[bool, str]] = {}
