class InvalidPartitionError(Exception):
    """This exception is raised when partition points are not strictly increasing"""

    def __init__(self, reason):
        super().__init__(f"Invalid partition: {reason}")


class RefinementError(Exception):
    """This exception is raised when a one-point refinement is not admissible"""

    def __init__(self, t, a, b):
        super().__init__(f"Cannot refine at {t}: point must lie in ({a}, {b}) and not in the partition")


class MartingaleDefectError(Exception):
    """This exception is raised when the two forms of a mu-increment disagree"""

    def __init__(self, a, b, increment_form, difference_form):
        self.increment_form = increment_form
        self.difference_form = difference_form
        super().__init__(
            f"mu((a, b]) forms disagree on ({a}, {b}]: "
            f"omega(|X(b) - X(a)|^2) = {increment_form:.17g}, "
            f"omega(|X(b)|^2) - omega(|X(a)|^2) = {difference_form:.17g}; X is not a martingale"
        )
