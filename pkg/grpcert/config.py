#########################
# General configuration #
#########################

# Name of the environment variable that overrides the thread count.
threads_environment_variable = "GRPCERT_THREADS"
# Default thread count; None means the machine parallelism.
default_threads = None

############################
# Group core configuration #
############################

# Check the group axioms exhaustively up to this order, by sampling above it.
group_validation_exhaustive_order = 512
# Number of random triples tested for associativity above the exhaustive order.
group_validation_samples = 20000
# Seed of the associativity sampler, so validation is reproducible.
group_validation_seed = 0
# Closure of permutation generators stops with TooLarge past this order.
permutation_closure_order_cap = 10000
# all_subgroups refuses groups larger than this.
subgroup_enumeration_order_cap = 3125
# Rows of the Cayley table built at once by the catalog constructors.
catalog_row_chunk = 256

################################
# Character core configuration #
################################

# How many primes Dixon's method tries before giving up with LiftFailure.
dixon_max_prime_attempts = 6
# Exact orthogonality is verified for every table with at most this many classes.
character_table_verify_class_limit = 700
# Linear characters of the center tried by the center sphere search.
center_character_search_limit = 5000

###############################
# Constructions configuration #
###############################

# Degree bound for effective characters is this factor times p^2.
amalgam_degree_bound_factor = 2
# Number of injections A_p -> (Z/p)^r compared when sweeping injections.
abelian_injection_sweep = 2

###############################
# Chain complex configuration #
###############################

# Coefficient bound of the cocycle search.
cocycle_height_bound = 1
# Upper limit on the number of cocycle tuples tried by the spherical search.
spherical_search_tuple_limit = 5000

########################
# Report configuration #
########################

# Version of the report document layout.
report_schema_version = 1
# Default report format.
report_default_format = "json"
