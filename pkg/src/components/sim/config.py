# Accepted generation ranges
class SiteLimits:
    MIN_NODES = 10
    MAX_NODES = 500
    MIN_BRANCHING = 2
    MAX_BRANCHING = 8
    MIN_TASKS = 1
    MAX_TASKS = 500
    MAX_ATTEMPTS = 20


# Generation defaults
class SiteDefaults:
    NODES = 100
    BRANCHING = 3
    TASKS = 20
    LOOP_TRAPS = 2
    PENALTY_PAGES = 0
    WINDOW_FACTOR = 2  # forward links land within branching * WINDOW_FACTOR pages
    CONTENT_TOKENS = 6  # page-specific text tokens; keeps distinct pages below the default tau


# Task shape
class TaskDefaults:
    MIN_DISTANCE = 3
    MAX_DISTANCE = 6
    STEP_BUDGET_FACTOR = 3
    DIRECTIVE_TEMPLATE = "open {name} page"


# Policy defaults
class PolicyDefaults:
    EPSILON = 0.35
    P_FOLLOW = 0.9
    NOISE_SIGMA = 0.5
    VETO_WEIGHT = 0.1
    MIN_RELEVANCE = -1.0  # no floor; raise to follow only close directives


# Observation vocabulary
class Vocabulary:
    PAGE = "page"
    LINK = "link"
    BANNER = "banner"
    RETRY = "button retry"
    TEXT = "text"
    SYLLABLES = (
        "ba", "ko", "ri", "mu", "te", "sa", "lo", "ni", "ve", "du",
        "ka", "po", "zi", "fe", "ru", "mi", "ta", "go", "le", "shi",
    )
    MIN_SYLLABLES = 2
    MAX_SYLLABLES = 4


# Files written by save_site
class SiteFiles:
    SITE = "site.json"
    TASKS = "tasks.json"
