from ._abstract import *  # noqa: F401, F403
from ._classic import *  # noqa: F401, F403
from ._eb import *  # noqa: F401, F403
from ._funcs import *  # noqa: F401, F403
from ._oracle import *  # noqa: F401, F403
from ._ure import *  # noqa: F401, F403
