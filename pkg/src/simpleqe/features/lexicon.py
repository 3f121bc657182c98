"""Closed-class word lists and suffix rules for the default tagger."""

FUNCTION_WORDS = frozenset("""
a an the this that these those some any each every no all both either neither
another such what which whose whatever whichever
i me my mine myself you your yours yourself yourselves he him his himself she
her hers herself it its itself we us our ours ourselves they them their theirs
themselves one ones someone somebody something anyone anybody anything
everyone everybody everything nobody nothing who whom whoever
about above across after against along amid among around as at before behind
below beneath beside besides between beyond by despite down during except for
from in inside into like near of off on onto out outside over past per since
than through throughout till to toward towards under underneath unlike until
up upon via with within without
and but or nor so yet for because although though while whereas if unless
whether once lest
be am is are was were been being have has had having do does did doing done
will would shall should can could may might must ought
'm 's 're 've 'd 'll n't not
there here when where why how then
""".split())

NOUNS = frozenset("""
time year people way day man woman child children thing world life hand part
place case week company system program question work government number night
point home water room mother father area money story fact month lot right study
book eye job word business issue side kind head house service friend power hour
game line end member law car city community name president team minute idea
kid body information school face others level office door health person art war
history party result change morning reason research girl guy moment air teacher
force education cat dog food
""".split())

VERBS = frozenset("""
say said says get got gets make made makes go went goes gone know knew known
take took taken see saw seen come came comes think thought look want give gave
given use find found tell told ask asked seem feel felt try leave left call
keep kept let begin began help show heard hear play run ran move live believe
hold held bring brought happen write wrote provide sit sat stand stood lose
lost pay paid meet met include continue set learn lead led understand watch
follow stop create speak spoke read allow add spend spent grow grew open walk
win won offer remember love consider appear buy bought wait serve die send
sent expect build built stay fall fell cut reach kill remain sleeps sleep eat
ate eats sleeping
""".split())

ADJECTIVES = frozenset("""
good new first last long great little own other old right big high different
small large next early young important few public bad same able late hard
major better best sure free true whole real full clear easy simple strong
possible special certain open short low recent happy nice fine
""".split())

ADVERBS = frozenset("""
very also just now only even back still well never always often again already
soon too almost quite rather perhaps maybe ever together away yesterday today
tomorrow sometimes usually however
""".split())

# (suffix, tag) checked in order; first match wins
SUFFIX_RULES = (
    ("ly", "adverb"),
    ("ward", "adverb"),
    ("wise", "adverb"),
    ("tion", "noun"),
    ("sion", "noun"),
    ("ment", "noun"),
    ("ness", "noun"),
    ("ity", "noun"),
    ("ism", "noun"),
    ("ist", "noun"),
    ("ship", "noun"),
    ("hood", "noun"),
    ("ance", "noun"),
    ("ence", "noun"),
    ("ous", "adjective"),
    ("ful", "adjective"),
    ("less", "adjective"),
    ("able", "adjective"),
    ("ible", "adjective"),
    ("ive", "adjective"),
    ("ical", "adjective"),
    ("ic", "adjective"),
    ("al", "adjective"),
    ("ish", "adjective"),
    ("est", "adjective"),
    ("ize", "verb"),
    ("ise", "verb"),
    ("ify", "verb"),
    ("ate", "verb"),
    ("ing", "verb"),
    ("ed", "verb"),
    ("en", "verb"),
)

# contraction splitting: (lowercase suffix, split offset from the end)
CONTRACTIONS = (
    ("n't", 3),
    ("'s", 2),
    ("'re", 3),
    ("'ve", 3),
    ("'ll", 3),
    ("'d", 2),
    ("'m", 2),
)
