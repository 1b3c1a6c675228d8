"""Exception hierarchy shared by the pipeline stages."""


class CricnetError(Exception):
    """Base class for every error raised by this package."""


class IngestError(CricnetError):
    pass


class MatchParseError(IngestError):
    def __init__(self, path, reason):
        self.path = path
        super().__init__(f"{path}: {reason}")


class LineupError(IngestError):
    def __init__(self, path, team, reason):
        self.path = path
        self.team = team
        super().__init__(f"{path}: lineup of {team!r} {reason}")


class UnresolvedIdentityError(IngestError):
    def __init__(self, names, where=""):
        self.names = sorted(names)
        prefix = f"{where}: " if where else ""
        super().__init__(f"{prefix}no registry identifier for {', '.join(self.names)}")


class RegistryRowError(IngestError):
    def __init__(self, line, reason):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class DuplicateIdentifierError(IngestError):
    def __init__(self, identifiers):
        self.identifiers = sorted(identifiers)
        super().__init__(f"duplicate registry identifier(s): {', '.join(self.identifiers)}")


class MatchConflictError(IngestError):
    def __init__(self, match_id):
        self.match_id = match_id
        super().__init__(f"match id {match_id!r} already present in the archive")


class EmptyGraphError(CricnetError):
    pass


class SelectionError(CricnetError):
    pass


class RoleShortfallError(SelectionError):
    def __init__(self, role, needed, available):
        self.role = role
        super().__init__(f"need {needed} {role} player(s), only {available} ranked")
