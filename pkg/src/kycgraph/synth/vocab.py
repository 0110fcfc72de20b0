"""Bundled word lists so generation is hermetic (no faker dependency).

Selection from these lists is always driven by the caller's seeded RNG.
"""

FIRST_NAMES = (
    "Ava", "Noah", "Mia", "Liam", "Zoe", "Ethan", "Ines", "Hugo", "Lena",
    "Omar", "Sofia", "Mateo", "Nora", "Felix", "Iris", "Dario", "Alma",
    "Ravi", "Chloe", "Jonas", "Aisha", "Pavel", "Greta", "Tomas", "Leila",
    "Marco", "Dana", "Viktor", "Elif", "Samir", "Anya", "Diego", "Freya",
    "Kenji", "Petra", "Yusuf", "Clara", "Stefan", "Amara", "Nikolai",
)

LAST_NAMES = (
    "Hartmann", "Okafor", "Lindgren", "Moreau", "Castellanos", "Novak",
    "Ferreira", "Kowalski", "Tanaka", "Svensson", "Marchetti", "Dubois",
    "Petrov", "Nilsen", "Varga", "Costa", "Keller", "Ibrahim", "Olsen",
    "Fischer", "Rahman", "Bauer", "Silva", "Johansson", "Weber", "Rossi",
    "Andersen", "Popescu", "Jensen", "Haddad", "Vermeer", "Kovacs",
    "Almeida", "Berg", "Santos", "Wagner", "Lemaire", "Novotny", "Diallo",
    "Eriksson",
)

OCCUPATIONS = (
    "accountant", "architect", "bar owner", "civil engineer", "consultant",
    "dentist", "electrician", "freight broker", "graphic designer",
    "importer", "jeweller", "lawyer", "logistics manager", "nurse",
    "pharmacist", "property developer", "restaurateur", "retired",
    "software engineer", "student", "teacher", "trader", "travel agent",
    "warehouse operator",
)

COMPANIES = (
    "Altura Trading", "Bluewater Freight", "Cedar Ridge Imports",
    "Delta Marine Supplies", "Eastgate Textiles", "Fairview Motors",
    "Granite Peak Consulting", "Harbor Light Foods", "Ironwood Timber",
    "Juniper Electronics", "Kestrel Aviation Parts", "Lakeshore Jewelers",
    "Meridian Payments", "Northwind Logistics", "Opal Coast Travel",
    "Pinnacle Auto Parts", "Quartz Valley Mining", "Riverbend Pharma",
    "Sablewood Antiques", "Tidewater Seafood", "Umbra Security Services",
    "Vantage Property Group", "Westport Chandlery", "Xenia Art House",
    "Yellowfin Exports", "Zephyr Courier", "Arcade Commodities",
    "Bastion Metals", "Corsair Shipping", "Dune Hospitality",
    "Ember Energy Trading", "Falcon Crest Farms", "Gilded Lantern Casino",
    "Horizon Microfinance", "Islet Duty Free", "Jade Orchid Imports",
    "Kiln Creek Ceramics", "Lodestar Bullion", "Mangrove Holdings",
    "Nimbus Data Services",
)

STREETS = (
    "Alder Row", "Birch Lane", "Cobble Court", "Dockside Walk", "Elm Street",
    "Foundry Road", "Garnet Avenue", "Harbor View", "Ivy Terrace",
    "Juniper Close", "King's Wharf", "Linden Square", "Mill Race",
    "North Quay", "Orchard Gate", "Pier Approach", "Quarry Hill",
    "Rope Walk", "Saltmarsh Drive", "Tanners Yard", "Union Crescent",
    "Vine Passage", "Wharf Steps", "Yew Tree Walk", "Zinc Works Road",
    "Anchor Place", "Beacon Rise", "Cannon Row", "Drovers Way", "Ferry Lane",
)

CITIES = (
    "Arlingford", "Brackwell", "Carville", "Dunmore", "Easthaven",
    "Fenbridge", "Garrowby", "Halstead", "Inverkeld", "Jessalton",
    "Kirkwall Bay", "Lowmarsh", "Milbourne", "Netherford", "Oakhampton",
    "Pellbrook", "Quayside", "Ravensmoor", "Silverstrand", "Thornbury",
    "Ulverscroft", "Vantry", "Westmere", "Yarrowdale", "Zedburgh",
    "Ashcombe", "Bleakmoor", "Crowmarsh", "Drumlore", "Elsfield",
)

# ISO 3166-1 alpha-2; weights skew toward a handful of home markets.
COUNTRIES = (
    "US", "US", "US", "GB", "GB", "DE", "DE", "FR", "NL", "ES", "IT", "PT",
    "SE", "NO", "DK", "PL", "CZ", "AT", "CH", "IE", "BE", "CA", "AU", "JP",
    "SG", "BR", "MX", "IN", "ZA", "TR",
)

# Fixed high-risk jurisdiction list (8 ISO codes) baked into the default
# configuration.
HIGH_RISK_JURISDICTIONS = ("IR", "KP", "SY", "CU", "MM", "AF", "YE", "VE")

CURRENCIES = ("USD", "USD", "USD", "USD", "USD", "USD", "EUR", "EUR", "EUR",
              "GBP", "GBP", "CHF", "JPY", "SEK", "CAD", "AUD")

ACCOUNT_TYPES = ("CHECKING", "CHECKING", "CHECKING", "SAVINGS", "SAVINGS",
                 "BUSINESS", "BROKERAGE")

ACCOUNT_PRODUCTS = ("debit-card", "credit-card", "overdraft", "wire-access",
                    "fx-forward", "merchant-services", "safe-deposit")

ALERT_TYPES = ("TXN_STRUCTURING", "VELOCITY", "SANCTION_SCREEN",
               "KYC_REFRESH", "CASH_INTENSIVE", "DORMANT_REACTIVATION")

SANCTION_LISTS = ("OFAC_SDN", "EU_CONSOLIDATED", "UN_SECURITY_COUNCIL",
                  "HMT_UK")

PEP_POSITIONS = ("deputy minister", "provincial governor", "state senator",
                 "central bank director", "ambassador", "customs chief",
                 "mayor", "military procurement officer")

RELATIONSHIP_KINDS = ("FAMILY", "BUSINESS_PARTNER", "EMPLOYER")
