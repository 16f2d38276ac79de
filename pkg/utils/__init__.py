# Utils package