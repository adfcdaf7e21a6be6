"""Exception hierarchy shared by the library and the command line."""


class LockerError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(LockerError, ValueError):
    """An invalid game or experiment configuration.

    ``field`` names the offending configuration key when there is one.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class InvalidN(LockerError, ValueError):
    pass


class TooLarge(LockerError, ValueError):
    pass


class BudgetExceeded(LockerError):
    pass


class IndexOutOfRange(LockerError, IndexError):
    pass


class EmptyLockerEncountered(LockerError):
    """A pointer-following player opened a locker holding no label."""

    def __init__(self, player, locker):
        super().__init__(f"player {player} opened empty locker {locker}")
        self.player = player
        self.locker = locker
